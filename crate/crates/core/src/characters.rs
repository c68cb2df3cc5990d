//! Dirichlet characters modulo an ideal.
//!
//! A character is an exponent vector `(c_1, …, c_t)` against the invariant
//! factor basis of the unit group; its value on a unit with discrete log
//! `x` is `ζ_m^{Σ c_i x_i m/d_i}` where `m` is the group exponent. Characters
//! are numbered mixed-radix with `c_1` varying fastest, so index 0 is the
//! trivial character.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::numfield::AlgInt;
use crate::residue::ResidueRing;

const ZERO_VALUE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Character {
    ring: Arc<ResidueRing>,
    index: usize,
    exps: Vec<u64>,
    m: u64,
    values: Arc<Vec<u32>>,
    conductor: Arc<OnceLock<usize>>,
}

/// Every character modulo the ring's modulus, in index order.
pub fn all_characters(ring: &Arc<ResidueRing>) -> Vec<Character> {
    (0..ring.phi()).map(|i| Character::from_index(ring, i).expect("index in range")).collect()
}

impl Character {
    pub fn trivial(ring: &Arc<ResidueRing>) -> Character {
        Character::from_index(ring, 0).expect("trivial character exists")
    }

    pub fn from_index(ring: &Arc<ResidueRing>, index: usize) -> Result<Character> {
        if index >= ring.phi() {
            return Err(Error::InvalidParams(format!(
                "character index {index} out of range (group order {})",
                ring.phi()
            )));
        }
        let group = ring.unit_group();
        let mut rest = index as u64;
        let exps: Vec<u64> = group
            .basis
            .iter()
            .map(|&(_, d)| {
                let c = rest % d;
                rest /= d;
                c
            })
            .collect();
        Ok(Character::from_exps(ring, index, exps))
    }

    fn from_exps(ring: &Arc<ResidueRing>, index: usize, exps: Vec<u64>) -> Character {
        let group = ring.unit_group();
        let m = group.exponent;
        let weights: Vec<u64> = group.basis.iter().zip(&exps).map(|(&(_, d), c)| c * (m / d)).collect();
        let values: Vec<u32> = (0..ring.size())
            .map(|idx| match ring.dlog(idx) {
                Some(x) => (x.iter().zip(&weights).map(|(a, w)| a * w % m).sum::<u64>() % m) as u32,
                None => ZERO_VALUE,
            })
            .collect();
        Character {
            ring: ring.clone(),
            index,
            exps,
            m,
            values: Arc::new(values),
            conductor: Arc::new(OnceLock::new()),
        }
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Order of the roots of unity the values live in.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    /// Exponent `j` with `χ(x) = ζ_m^j`, or `None` on non-units.
    #[inline]
    pub fn value_exp(&self, idx: usize) -> Option<u64> {
        let v = self.values[idx];
        (v != ZERO_VALUE).then_some(v as u64)
    }

    pub fn eval_index(&self, idx: usize) -> CycInt {
        match self.value_exp(idx) {
            Some(j) => CycInt::root(self.m, j),
            None => CycInt::zero(self.m),
        }
    }

    pub fn eval(&self, a: &AlgInt) -> Result<CycInt> {
        Ok(self.eval_index(self.ring.index_of(a)?))
    }

    /// Whether the divisor `d` (a lattice index) is an induced modulus:
    /// `χ` is constant on units in each class modulo `d`.
    pub fn is_induced_modulus(&self, d: usize) -> bool {
        let proj = self.ring.projection(d);
        let size = self.ring.lattice().norm(d).try_into().map(|x: u64| x as usize).unwrap();
        let mut seen = vec![ZERO_VALUE; size];
        for &u in self.ring.unit_indices() {
            let key = proj[u] as usize;
            let v = self.values[u];
            if seen[key] == ZERO_VALUE {
                seen[key] = v;
            } else if seen[key] != v {
                return false;
            }
        }
        true
    }

    /// Lattice indices of all induced moduli.
    pub fn induced_moduli(&self) -> Vec<usize> {
        (0..self.ring.lattice().len()).filter(|&d| self.is_induced_modulus(d)).collect()
    }

    /// Lattice index of the conductor.
    pub fn conductor_index(&self) -> usize {
        *self.conductor.get_or_init(|| {
            let lat = self.ring.lattice();
            let induced = self.induced_moduli();
            // divisors are graded by norm, so the first hit is minimal by norm
            let first = induced[0];
            assert!(
                induced.iter().all(|&d| lat.divides(first, d)),
                "induced moduli have no least element under divisibility"
            );
            first
        })
    }

    pub fn conductor(&self) -> Ideal {
        self.ring.lattice().ideal(self.conductor_index()).clone()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor_index() == self.ring.lattice().top_index()
    }

    /// Value of the primitive character inducing `χ` at `u`, which only has
    /// to be a unit modulo the conductor. Computed from any unit modulo `n`
    /// lifting `u`.
    pub fn primitive_eval(&self, u: &AlgInt) -> Result<CycInt> {
        let d = self.conductor_index();
        let ui = self.ring.index_of(u)?;
        let lat = self.ring.lattice();
        if !lat.coprime(self.ring.gcd_class(ui), d) {
            return Err(Error::NotUnitModConductor);
        }
        let lift = self
            .ring
            .unit_indices()
            .iter()
            .copied()
            .find(|&a| self.ring.congruent(a, ui, d))
            .expect("every unit modulo the conductor lifts to a unit modulo n");
        Ok(self.eval_index(lift))
    }

    /// All values `χ(a)` over lifts `a ≡ u (mod conductor)`; used to check
    /// that `primitive_eval` does not depend on the lift.
    pub fn primitive_lift_values(&self, u: &AlgInt) -> Result<Vec<u64>> {
        let d = self.conductor_index();
        let ui = self.ring.index_of(u)?;
        Ok(self
            .ring
            .unit_indices()
            .iter()
            .filter(|&&a| self.ring.congruent(a, ui, d))
            .map(|&a| self.value_exp(a).unwrap())
            .collect())
    }

    /// `Σ χ(a)` over units `a ≡ r (mod d)` for a primitive `χ`.
    pub fn char_sum_lemma(&self, r: &AlgInt, d: &Ideal) -> Result<CycInt> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let ri = self.ring.index_of(r)?;
        if !self.ring.is_unit_index(ri) {
            return Err(Error::InvalidParams("r must be coprime to the modulus".into()));
        }
        if !d.divides(self.ring.modulus())? {
            return Err(Error::NotADivisor);
        }
        let di = self.ring.lattice().index_of(d).expect("divisor is enumerated");
        let mut acc = CycInt::zero(self.m);
        let one = BigInt::from(1);
        for &a in self.ring.unit_indices() {
            if self.ring.congruent(a, ri, di) {
                acc.add_term(self.value_exp(a).unwrap(), &one);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;

    fn rational_ring(m: i64) -> Arc<ResidueRing> {
        let q = Arc::new(NumberField::from_i64(&[0, 1]).unwrap());
        Arc::new(ResidueRing::new(&Ideal::from_int(&q, m).unwrap()).unwrap())
    }

    fn gauss_ring(m: i64) -> Arc<ResidueRing> {
        let k = Arc::new(NumberField::from_i64(&[1, 0, 1]).unwrap());
        Arc::new(ResidueRing::new(&Ideal::from_int(&k, m).unwrap()).unwrap())
    }

    #[test]
    fn character_counts() {
        let k = Arc::new(NumberField::from_i64(&[1, 0, 1]).unwrap());
        let whole = Arc::new(ResidueRing::new(&Ideal::unit(&k)).unwrap());
        assert_eq!(all_characters(&whole).len(), 1);
        assert!(all_characters(&whole)[0].is_trivial());
        assert_eq!(all_characters(&gauss_ring(3)).len(), 8);
        let p = Ideal::principal(&k, &k.element_i64(&[1, 1]).unwrap()).unwrap();
        let rp = Arc::new(ResidueRing::new(&p).unwrap());
        assert_eq!(all_characters(&rp).len(), 1);
    }

    #[test]
    fn evaluation() {
        let ring = gauss_ring(3);
        let k = ring.field().clone();
        let chars = all_characters(&ring);
        assert!(chars[0].is_trivial());
        for c in &chars {
            assert_eq!(c.eval(&k.one()).unwrap(), CycInt::from_int(1, 1));
            assert!(c.eval(&k.zero()).unwrap().is_zero());
        }
        let (g, order) = ring.unit_basis()[0].clone();
        assert_eq!(order, 8);
        assert_eq!(chars[1].eval(&g).unwrap(), CycInt::root(8, 1));
        for u in ring.units() {
            assert_eq!(chars[0].eval(&u).unwrap(), CycInt::from_int(1, 1));
        }
    }

    #[test]
    fn conductors() {
        let ring = gauss_ring(3);
        let chars = all_characters(&ring);
        assert!(chars[0].conductor().is_unit());
        for c in &chars[1..] {
            assert_eq!(&c.conductor(), ring.modulus());
            assert!(c.is_primitive());
        }
        let r4 = rational_ring(4);
        let chars = all_characters(&r4);
        assert_eq!(chars.len(), 2);
        assert_eq!(chars[1].conductor().norm(), &BigInt::from(4));
    }

    #[test]
    fn primitive_values() {
        let r12 = rational_ring(12);
        let q = r12.field().clone();
        // the character mod 12 induced from the nontrivial character mod 4
        let chi = all_characters(&r12)
            .into_iter()
            .find(|c| c.conductor().norm() == &BigInt::from(4))
            .unwrap();
        assert_eq!(chi.eval(&q.from_int(7)).unwrap(), CycInt::from_int(1, -1));
        assert_eq!(chi.primitive_eval(&q.from_int(3)).unwrap(), CycInt::from_int(1, -1));
        assert_eq!(chi.primitive_eval(&q.from_int(1)).unwrap(), CycInt::from_int(1, 1));
        assert_eq!(chi.primitive_eval(&q.from_int(2)), Err(Error::NotUnitModConductor));
        let lifts = chi.primitive_lift_values(&q.from_int(3)).unwrap();
        assert_eq!(lifts.len(), 2);
        assert!(lifts.windows(2).all(|w| w[0] == w[1]));
        let trivial = Character::trivial(&r12);
        assert_eq!(trivial.primitive_eval(&q.from_int(6)).unwrap(), CycInt::from_int(1, 1));
    }

    #[test]
    fn character_sums() {
        let r4 = rational_ring(4);
        let q = r4.field().clone();
        let chi = &all_characters(&r4)[1];
        let unit = Ideal::unit(&q);
        assert!(chi.char_sum_lemma(&q.one(), &unit).unwrap().is_zero());
        let four = r4.modulus().clone();
        assert_eq!(chi.char_sum_lemma(&q.from_int(3), &four).unwrap(), CycInt::from_int(1, -1));
        assert_eq!(
            Character::trivial(&r4).char_sum_lemma(&q.one(), &unit),
            Err(Error::NotPrimitive)
        );
    }

    #[test]
    fn index_out_of_range() {
        let ring = gauss_ring(3);
        assert!(Character::from_index(&ring, 8).is_err());
    }
}
