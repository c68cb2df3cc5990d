//! Nonzero integral ideals of `Z[θ]` as Hermite-normal-form lattices.
//!
//! Products, sums (gcd) and intersections (lcm) are lattice computations.
//! Prime factorizations come from splitting rational primes with the
//! Dedekind–Kummer correspondence `p = ∏ ⟨p, g_i(θ)⟩^{e_i}` (valid because
//! the presented order is assumed maximal) and valuations are read off by
//! repeated divisibility tests.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnf::{self, Column};
use crate::numfield::{json_bigint, AlgInt, NumberField};
use crate::poly;

#[derive(Clone)]
pub struct Ideal {
    field: Arc<NumberField>,
    hnf: Vec<Column>,
    norm: BigInt,
    factors: Arc<OnceLock<Vec<(PrimeIdeal, u32)>>>,
}

/// A prime ideal `⟨p, g(θ)⟩` lying over the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub residue_char: BigInt,
    pub residue_degree: u32,
    /// The monic factor of the minimal polynomial modulo `p` that defines it.
    pub poly: Vec<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> &BigInt {
        self.ideal.norm()
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal").field("hnf", &self.hnf).field("norm", &self.norm).finish()
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "<{}>", self.hnf[0][0]);
        }
        write!(f, "[")?;
        for (j, c) in self.hnf.iter().enumerate() {
            if j > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "{}", parts.join(","))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.hnf == other.hnf && same_field(&self.field, &other.field)
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.hnf.hash(state);
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded by norm, ties broken by the HNF entries.
impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm.cmp(&other.norm).then_with(|| self.hnf.cmp(&other.hnf))
    }
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a.min_poly() == b.min_poly()
}

fn algint_of(col: &Column) -> AlgInt {
    AlgInt { coords: col.clone() }
}

impl Ideal {
    pub(crate) fn from_hnf(field: Arc<NumberField>, hnf: Vec<Column>) -> Ideal {
        let norm = hnf::det(&hnf);
        Ideal { field, hnf, norm, factors: Arc::new(OnceLock::new()) }
    }

    /// Smallest ideal containing all of `gens`.
    pub fn from_generators(field: &Arc<NumberField>, gens: &[AlgInt]) -> Result<Ideal> {
        let n = field.degree();
        if gens.iter().any(|g| g.coords.len() != n) {
            return Err(Error::FieldMismatch);
        }
        let nonzero: Vec<&AlgInt> = gens.iter().filter(|g| !g.is_zero()).collect();
        let first = nonzero.first().ok_or(Error::ZeroIdeal)?;
        let modulus = field.norm(first);
        let cols: Vec<Column> = nonzero.iter().flat_map(|g| field.mul_matrix(g)).collect();
        let h = hnf::hnf(n, cols, Some(&modulus)).expect("nonzero ideal has full rank");
        Ok(Ideal::from_hnf(field.clone(), h))
    }

    pub fn principal(field: &Arc<NumberField>, a: &AlgInt) -> Result<Ideal> {
        Ideal::from_generators(field, std::slice::from_ref(a))
    }

    pub fn from_int(field: &Arc<NumberField>, m: i64) -> Result<Ideal> {
        Ideal::principal(field, &field.from_int(m))
    }

    pub fn unit(field: &Arc<NumberField>) -> Ideal {
        Ideal::from_int(field, 1).expect("1 is nonzero")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn hnf(&self) -> &[Column] {
        &self.hnf
    }

    /// Diagonal of the HNF basis; representatives of `O_K/self` have
    /// coordinates in `[0, diag_i)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.hnf.iter().enumerate().map(|(j, c)| c[j].clone()).collect()
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.norm.is_one()
    }

    /// Smallest positive rational integer in the ideal.
    fn min_integer(&self) -> &BigInt {
        &self.hnf[0][0]
    }

    fn check_field(&self, other: &Ideal) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn contains(&self, a: &AlgInt) -> bool {
        hnf::contains(&self.hnf, &a.coords)
    }

    /// Canonical representative of `a` modulo this ideal.
    pub fn reduce(&self, a: &AlgInt) -> AlgInt {
        AlgInt { coords: hnf::reduce(&self.hnf, &a.coords) }
    }

    /// Ideal sum `a + b`.
    pub fn gcd(&self, other: &Ideal) -> Result<Ideal> {
        self.check_field(other)?;
        let modulus = self.min_integer().gcd(other.min_integer());
        let cols: Vec<Column> = self.hnf.iter().chain(&other.hnf).cloned().collect();
        let h = hnf::hnf(self.field.degree(), cols, Some(&modulus)).expect("full rank");
        Ok(Ideal::from_hnf(self.field.clone(), h))
    }

    /// Intersection `a ∩ b`.
    pub fn lcm(&self, other: &Ideal) -> Result<Ideal> {
        self.check_field(other)?;
        Ok(Ideal::from_hnf(self.field.clone(), hnf::intersect(&self.hnf, &other.hnf)))
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        self.check_field(other)?;
        let f = &self.field;
        let modulus = self.min_integer() * other.min_integer();
        let mut cols = Vec::with_capacity(f.degree() * f.degree());
        for a in &self.hnf {
            for b in &other.hnf {
                cols.push(f.mul_unchecked(&algint_of(a), &algint_of(b)).coords);
            }
        }
        let h = hnf::hnf(f.degree(), cols, Some(&modulus)).expect("full rank");
        Ok(Ideal::from_hnf(f.clone(), h))
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.field);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// `self | other`, i.e. `other ⊆ self`.
    pub fn divides(&self, other: &Ideal) -> Result<bool> {
        self.check_field(other)?;
        if !(&other.norm % &self.norm).is_zero() {
            return Ok(false);
        }
        Ok(other.hnf.iter().all(|c| hnf::contains(&self.hnf, c)))
    }

    /// The unique `c` with `divisor · c = self`.
    pub fn divexact(&self, divisor: &Ideal) -> Result<Ideal> {
        if !divisor.divides(self)? {
            return Err(Error::NotDivisible);
        }
        let mine = self.factor();
        let theirs = divisor.factor();
        let mut acc = Ideal::unit(&self.field);
        for (p, e) in mine {
            let sub = theirs.iter().find(|(q, _)| q == p).map_or(0, |(_, f)| *f);
            acc = acc.mul(&p.ideal.pow(e - sub))?;
        }
        Ok(acc)
    }

    /// Prime factorization, ordered by residue characteristic and then by
    /// the defining factor modulo `p`. Cached after the first call.
    pub fn factor(&self) -> &[(PrimeIdeal, u32)] {
        self.factors.get_or_init(|| self.compute_factorization())
    }

    fn compute_factorization(&self) -> Vec<(PrimeIdeal, u32)> {
        let field = &self.field;
        let mut out = Vec::new();
        if self.is_unit() {
            return out;
        }
        for (p, _) in poly::factor_integer(&self.norm) {
            let pu = p.to_u64().expect("residue characteristic fits u64");
            for (g, _) in poly::factor_mod_p(field.min_poly(), pu) {
                let prime = prime_above(field, &p, &g);
                let mut t = 0u32;
                let mut power = prime.ideal.clone();
                while power.divides(self).expect("same field") {
                    t += 1;
                    power = power.mul(&prime.ideal).expect("same field");
                }
                if t > 0 {
                    out.push((prime, t));
                }
            }
        }
        let mut check = Ideal::unit(field);
        for (p, e) in &out {
            check = check.mul(&p.ideal.pow(*e)).expect("same field");
        }
        assert!(check == *self, "prime factorization does not multiply back to the ideal");
        out
    }

    /// All divisors, graded by norm with ties broken by HNF.
    pub fn divisors(&self) -> Vec<Ideal> {
        let mut out = vec![Ideal::unit(&self.field)];
        for (p, e) in self.factor() {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur = cur.mul(&p.ideal).expect("same field");
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// Valuation at a prime ideal.
    pub fn valuation(&self, p: &PrimeIdeal) -> u32 {
        self.factor().iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

/// The prime `⟨p, g(θ)⟩` for a monic irreducible factor `g` of the minimal
/// polynomial modulo `p`.
pub fn prime_above(field: &Arc<NumberField>, p: &BigInt, g: &[u64]) -> PrimeIdeal {
    let theta = field.theta();
    let mut gen = field.zero();
    let mut power = field.one();
    for &c in g {
        if c != 0 {
            gen = field.add(&gen, &field.scale(&power, &BigInt::from(c))).expect("same field");
        }
        power = field.mul_unchecked(&power, &theta);
    }
    let ideal = Ideal::from_generators(field, &[field.from_bigint(p.clone()), gen])
        .expect("p is nonzero");
    PrimeIdeal {
        ideal,
        residue_char: p.clone(),
        residue_degree: (g.len() - 1) as u32,
        poly: g.to_vec(),
    }
}

/// Every nonzero ideal of norm at most `bound`, sorted by norm and HNF.
///
/// Enumerates upper-triangular HNF bases column by column. The diagonal
/// entries form a divisor chain `d_{j} | d_{j-1}` (multiplying by `θ` raises
/// the degree of the leading term) and each new column is kept only if
/// `θ·col_{j-1} − (d_{j-1}/d_j)·col_j` already lies in the span of the earlier
/// columns; the last column is checked for closure under `θ` directly.
pub fn ideals_up_to_norm(field: &Arc<NumberField>, bound: u64) -> Vec<Ideal> {
    let n = field.degree();
    let theta = field.theta();
    let mut out = Vec::new();
    let mut cols: Vec<Column> = Vec::with_capacity(n);
    enumerate_columns(field, &theta, bound, 1, &mut cols, &mut out);
    out.sort();
    debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
    let _ = n;
    out
}

fn enumerate_columns(
    field: &Arc<NumberField>,
    theta: &AlgInt,
    bound: u64,
    prod: u64,
    cols: &mut Vec<Column>,
    out: &mut Vec<Ideal>,
) {
    let n = field.degree();
    let j = cols.len();
    if j == n {
        let last = field.mul_unchecked(&algint_of(&cols[n - 1]), theta);
        if hnf::contains(cols, &last.coords) {
            out.push(Ideal::from_hnf(field.clone(), cols.clone()));
        }
        return;
    }
    let diag: Vec<u64> = (0..j).map(|i| cols[i][i].to_u64().unwrap()).collect();
    let candidates: Vec<u64> = if j == 0 {
        (1..=bound).collect()
    } else {
        let prev = diag[j - 1];
        (1..=prev).filter(|d| prev.is_multiple_of(*d)).collect()
    };
    for dj in candidates {
        if prod * dj > bound {
            continue;
        }
        // off-diagonal entries of column j, mixed radix over rows 0..j
        let mut offs = vec![0u64; j];
        loop {
            let mut col = vec![BigInt::zero(); n];
            for i in 0..j {
                col[i] = BigInt::from(offs[i]);
            }
            col[j] = BigInt::from(dj);
            let admissible = if j == 0 {
                true
            } else {
                let lifted = field.mul_unchecked(&algint_of(&cols[j - 1]), theta);
                let q = BigInt::from(diag[j - 1] / dj);
                let w: Vec<BigInt> = lifted.coords.iter().zip(&col).map(|(a, c)| a - &q * c).collect();
                debug_assert!(w[j..].iter().all(Zero::is_zero));
                hnf::contains(&cols[..j], &w[..j])
            };
            if admissible {
                cols.push(col);
                enumerate_columns(field, theta, bound, prod * dj, cols, out);
                cols.pop();
            }
            let mut i = 0;
            while i < j {
                offs[i] += 1;
                if offs[i] < diag[i] {
                    break;
                }
                offs[i] = 0;
                i += 1;
            }
            if i == j {
                break;
            }
        }
    }
}

/// JSON/CLI literal for an ideal: `{"gens": [[coords…], …]}` or `{"int": m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealLiteral {
    Gens { gens: Vec<Vec<serde_json::Value>> },
    Int { int: serde_json::Value },
}

impl IdealLiteral {
    pub fn parse(text: &str) -> Result<IdealLiteral> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, field: &Arc<NumberField>) -> Result<Ideal> {
        match self {
            IdealLiteral::Int { int } => {
                let m = json_bigint(int)?;
                Ideal::principal(field, &field.from_bigint(m))
            }
            IdealLiteral::Gens { gens } => {
                let elems = gens
                    .iter()
                    .map(|g| {
                        let coords = g.iter().map(json_bigint).collect::<Result<Vec<_>>>()?;
                        field.element(coords)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ideal::from_generators(field, &elems)
            }
        }
    }

    /// Literal of an ideal: the integer form in degree one, otherwise the
    /// HNF columns as generators.
    pub fn of(ideal: &Ideal) -> IdealLiteral {
        let to_json = |x: &BigInt| match x.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(x.to_string()),
        };
        if ideal.field().degree() == 1 {
            return IdealLiteral::Int { int: to_json(&ideal.hnf[0][0]) };
        }
        IdealLiteral::Gens {
            gens: ideal.hnf.iter().map(|c| c.iter().map(to_json).collect()).collect(),
        }
    }
}

/// The divisors of a fixed modulus indexed by prime exponent vectors, with
/// gcd, lcm and quotients done on exponents.
#[derive(Debug, Clone)]
pub struct DivisorLattice {
    modulus: Ideal,
    primes: Vec<PrimeIdeal>,
    max_exps: Vec<u32>,
    divisors: Vec<Ideal>,
    exps: Vec<Vec<u32>>,
    by_code: Vec<usize>,
    by_hnf: HashMap<Vec<Column>, usize>,
}

impl DivisorLattice {
    pub fn new(modulus: &Ideal) -> DivisorLattice {
        let fac = modulus.factor();
        let primes: Vec<PrimeIdeal> = fac.iter().map(|(p, _)| p.clone()).collect();
        let max_exps: Vec<u32> = fac.iter().map(|(_, e)| *e).collect();
        let divisors = modulus.divisors();
        let exps: Vec<Vec<u32>> = divisors
            .iter()
            .map(|d| primes.iter().map(|p| d.valuation(p)).collect())
            .collect();
        let mut lattice = DivisorLattice {
            modulus: modulus.clone(),
            primes,
            max_exps,
            by_code: vec![usize::MAX; divisors.len()],
            by_hnf: divisors.iter().enumerate().map(|(i, d)| (d.hnf.clone(), i)).collect(),
            divisors,
            exps,
        };
        for i in 0..lattice.divisors.len() {
            let code = lattice.code(&lattice.exps[i]);
            lattice.by_code[code] = i;
        }
        lattice
    }

    fn code(&self, exps: &[u32]) -> usize {
        exps.iter()
            .zip(&self.max_exps)
            .fold(0usize, |acc, (e, m)| acc * (*m as usize + 1) + *e as usize)
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn max_exps(&self) -> &[u32] {
        &self.max_exps
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.divisors
    }

    pub fn ideal(&self, i: usize) -> &Ideal {
        &self.divisors[i]
    }

    pub fn exps(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn norm(&self, i: usize) -> &BigInt {
        self.divisors[i].norm()
    }

    /// Index of `O_K`, always 0.
    pub fn unit_index(&self) -> usize {
        0
    }

    /// Index of the modulus itself.
    pub fn top_index(&self) -> usize {
        self.divisors.len() - 1
    }

    pub fn index_of_exps(&self, exps: &[u32]) -> usize {
        self.by_code[self.code(exps)]
    }

    pub fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        self.by_hnf.get(&ideal.hnf).copied()
    }

    fn combine(&self, i: usize, j: usize, op: impl Fn(u32, u32) -> u32) -> usize {
        let e: Vec<u32> = self.exps[i].iter().zip(&self.exps[j]).map(|(a, b)| op(*a, *b)).collect();
        self.index_of_exps(&e)
    }

    pub fn gcd(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, u32::min)
    }

    pub fn lcm(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, u32::max)
    }

    /// `i | j`
    pub fn divides(&self, i: usize, j: usize) -> bool {
        self.exps[i].iter().zip(&self.exps[j]).all(|(a, b)| a <= b)
    }

    /// Index of `j / i`; requires `i | j`.
    pub fn quotient(&self, j: usize, i: usize) -> usize {
        self.combine(j, i, |a, b| a - b)
    }

    pub fn coprime(&self, i: usize, j: usize) -> bool {
        self.gcd(i, j) == 0
    }

    /// Indices of the divisors of divisor `i`.
    pub fn divisors_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&d| self.divides(d, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Arc<NumberField> {
        Arc::new(NumberField::from_i64(&[1, 0, 1]).unwrap())
    }

    fn el(k: &Arc<NumberField>, c: &[i64]) -> AlgInt {
        k.element_i64(c).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn generators() {
        let k = gauss();
        let a = Ideal::from_generators(&k, &[k.from_int(2), el(&k, &[1, 1])]).unwrap();
        let b = Ideal::principal(&k, &el(&k, &[1, 1])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.norm(), &big(2));
        assert!(Ideal::unit(&k).is_unit());
        let three = Ideal::from_int(&k, 3).unwrap();
        assert_eq!(three.diagonal(), vec![big(3), big(3)]);
        assert_eq!(three.norm(), &big(9));
        assert_eq!(Ideal::from_generators(&k, &[k.zero()]), Err(Error::ZeroIdeal));
        assert!(Ideal::from_generators(&k, &[]).is_err());
    }

    #[test]
    fn gcd_lcm_mul() {
        let k = gauss();
        let p = Ideal::principal(&k, &el(&k, &[1, 1])).unwrap();
        let three = Ideal::from_int(&k, 3).unwrap();
        let unit = Ideal::unit(&k);
        assert_eq!(three.gcd(&unit).unwrap(), unit);
        let a = p.pow(2);
        let b = Ideal::principal(&k, &el(&k, &[3, 3])).unwrap();
        assert_eq!(a.gcd(&b).unwrap(), p);
        assert_eq!(a.lcm(&b).unwrap(), Ideal::principal(&k, &el(&k, &[0, 6])).unwrap());
        let conj = Ideal::principal(&k, &el(&k, &[1, -1])).unwrap();
        assert_eq!(p.mul(&conj).unwrap(), Ideal::from_int(&k, 2).unwrap());
    }

    #[test]
    fn divisibility() {
        let k = gauss();
        let p = Ideal::principal(&k, &el(&k, &[1, 1])).unwrap();
        let two = Ideal::from_int(&k, 2).unwrap();
        let three = Ideal::from_int(&k, 3).unwrap();
        assert!(p.divides(&two).unwrap());
        assert_eq!(two.divexact(&p).unwrap(), p);
        assert_eq!(two.divexact(&two).unwrap(), Ideal::unit(&k));
        assert!(!three.divides(&p).unwrap());
        assert_eq!(p.divexact(&three), Err(Error::NotDivisible));
    }

    #[test]
    fn factorization() {
        let k = gauss();
        let p = Ideal::principal(&k, &el(&k, &[1, 1])).unwrap();
        let two = Ideal::from_int(&k, 2).unwrap();
        let f = two.factor();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.ideal, p);
        assert_eq!(f[0].1, 2);
        assert!(Ideal::unit(&k).factor().is_empty());
        let six = Ideal::from_int(&k, 6).unwrap();
        let f: Vec<(BigInt, u32, u32)> = six
            .factor()
            .iter()
            .map(|(q, e)| (q.residue_char.clone(), q.residue_degree, *e))
            .collect();
        assert_eq!(f, vec![(big(2), 1, 2), (big(3), 2, 1)]);
        assert_eq!(six.factor()[1].0.ideal, Ideal::from_int(&k, 3).unwrap());
    }

    #[test]
    fn divisor_enumeration() {
        let k = gauss();
        let unit = Ideal::unit(&k);
        assert_eq!(unit.divisors(), vec![unit.clone()]);
        let two = Ideal::from_int(&k, 2).unwrap();
        let p = Ideal::principal(&k, &el(&k, &[1, 1])).unwrap();
        assert_eq!(two.divisors(), vec![unit.clone(), p, two.clone()]);
        let six = Ideal::from_int(&k, 6).unwrap();
        assert_eq!(six.divisors().len(), 6);
    }

    #[test]
    fn rational_ideals_match_integers() {
        let q = Arc::new(NumberField::from_i64(&[0, 1]).unwrap());
        let a = Ideal::from_int(&q, 12).unwrap();
        let b = Ideal::from_int(&q, -18).unwrap();
        assert_eq!(a.gcd(&b).unwrap(), Ideal::from_int(&q, 6).unwrap());
        assert_eq!(a.lcm(&b).unwrap(), Ideal::from_int(&q, 36).unwrap());
        assert_eq!(a.mul(&b).unwrap(), Ideal::from_int(&q, 216).unwrap());
        let norms: Vec<BigInt> = a.divisors().iter().map(|d| d.norm().clone()).collect();
        assert_eq!(norms, [1, 2, 3, 4, 6, 12].map(big).to_vec());
    }

    #[test]
    fn enumeration_counts() {
        // Z: one ideal per positive integer
        let q = Arc::new(NumberField::from_i64(&[0, 1]).unwrap());
        assert_eq!(ideals_up_to_norm(&q, 30).len(), 30);
        // Z[i]: norms 1,2,4,5,5 and so on; compare against products of primes
        let k = gauss();
        let all = ideals_up_to_norm(&k, 50);
        let by_norm = |m: i64| all.iter().filter(|a| a.norm() == &big(m)).count();
        assert_eq!(by_norm(1), 1);
        assert_eq!(by_norm(2), 1);
        assert_eq!(by_norm(3), 0);
        assert_eq!(by_norm(5), 2);
        assert_eq!(by_norm(9), 1);
        assert_eq!(by_norm(25), 3);
        assert_eq!(by_norm(50), 3);
        for a in &all {
            // each enumerated lattice really is an ideal
            let regenerated = Ideal::from_generators(&k, &a.hnf.iter().map(algint_of).collect::<Vec<_>>()).unwrap();
            assert_eq!(&regenerated, a);
        }
    }

    #[test]
    fn literals() {
        let k = gauss();
        let lit = IdealLiteral::parse(r#"{"gens": [[2,0],[1,1]]}"#).unwrap();
        assert_eq!(lit.build(&k).unwrap().norm(), &big(2));
        let lit = IdealLiteral::parse(r#"{"int": 3}"#).unwrap();
        let three = lit.build(&k).unwrap();
        assert_eq!(three.norm(), &big(9));
        assert_eq!(IdealLiteral::of(&three).build(&k).unwrap(), three);
        assert!(IdealLiteral::parse(r#"{"gens": [[1,0,0]]}"#).unwrap().build(&k).is_err());
    }

    #[test]
    fn lattice_indexing() {
        let k = gauss();
        let six = Ideal::from_int(&k, 6).unwrap();
        let lat = DivisorLattice::new(&six);
        assert_eq!(lat.len(), 6);
        assert_eq!(lat.ideal(lat.unit_index()), &Ideal::unit(&k));
        assert_eq!(lat.ideal(lat.top_index()), &six);
        for i in 0..lat.len() {
            for j in 0..lat.len() {
                let g = lat.ideal(i).gcd(lat.ideal(j)).unwrap();
                assert_eq!(lat.ideal(lat.gcd(i, j)), &g);
                let l = lat.ideal(i).lcm(lat.ideal(j)).unwrap();
                assert_eq!(lat.ideal(lat.lcm(i, j)), &l);
                assert_eq!(lat.divides(i, j), lat.ideal(i).divides(lat.ideal(j)).unwrap());
                if lat.divides(i, j) {
                    let q = lat.ideal(j).divexact(lat.ideal(i)).unwrap();
                    assert_eq!(lat.ideal(lat.quotient(j, i)), &q);
                }
            }
        }
    }
}
