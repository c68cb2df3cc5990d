//! The finite quotient `O_K/n`.
//!
//! Residues are numbered by the mixed-radix value of their canonical
//! coordinates (first coordinate most significant), so increasing index is
//! lexicographic order on coordinates. Internal tables work on these indices;
//! the size of every table is bounded by the enumeration bound.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ideals::{DivisorLattice, Ideal};
use crate::numfield::{AlgInt, NumberField};
use crate::poly;

pub const DEFAULT_ENUMERATION_BOUND: u64 = 5000;

/// Rings up to this size keep a full addition table.
const ADD_TABLE_LIMIT: usize = 1024;

/// Small-integer copy of an HNF basis whose entries are bounded by its norm.
#[derive(Debug, Clone)]
struct SmallLattice {
    cols: Vec<Vec<i64>>,
    diag: Vec<i64>,
    strides: Vec<usize>,
}

impl SmallLattice {
    fn new(ideal: &Ideal) -> SmallLattice {
        let cols: Vec<Vec<i64>> = ideal
            .hnf()
            .iter()
            .map(|c| c.iter().map(|x| x.to_i64().expect("HNF entry fits i64")).collect())
            .collect();
        let diag: Vec<i64> = (0..cols.len()).map(|j| cols[j][j]).collect();
        let n = diag.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * diag[i + 1] as usize;
        }
        SmallLattice { cols, diag, strides }
    }

    fn reduce(&self, v: &mut [i64]) {
        for j in (0..self.cols.len()).rev() {
            let q = v[j].div_euclid(self.diag[j]);
            if q != 0 {
                for (x, c) in v.iter_mut().zip(&self.cols[j]) {
                    *x -= q * c;
                }
            }
        }
    }

    fn contains(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        for j in (0..self.cols.len()).rev() {
            if v[j] % self.diag[j] != 0 {
                return false;
            }
            let q = v[j] / self.diag[j];
            if q != 0 {
                for (x, c) in v.iter_mut().zip(&self.cols[j]) {
                    *x -= q * c;
                }
            }
        }
        true
    }

    fn index(&self, v: &mut [i64]) -> usize {
        self.reduce(v);
        v.iter().zip(&self.strides).map(|(x, s)| *x as usize * s).sum()
    }
}

/// Invariant-factor decomposition of `(O_K/n)^*` with discrete logarithms.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    /// Generators (as residue indices) with orders `d₁ | d₂ | …`.
    pub basis: Vec<(usize, u64)>,
    pub exponent: u64,
    /// Exponent vector of every unit, indexed by position in the unit list.
    dlog: Vec<Vec<u64>>,
}

impl UnitGroup {
    pub fn orders(&self) -> Vec<u64> {
        self.basis.iter().map(|(_, d)| *d).collect()
    }
}

#[derive(Debug)]
pub struct ResidueRing {
    field: Arc<NumberField>,
    modulus: Ideal,
    lattice: Arc<DivisorLattice>,
    small: SmallLattice,
    size: usize,
    coords: Vec<i64>,
    gcd_class: Vec<u32>,
    units: Vec<usize>,
    unit_pos: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    proj: Vec<OnceLock<Vec<u32>>>,
    group: OnceLock<UnitGroup>,
}

const NOT_UNIT: u32 = u32::MAX;

impl ResidueRing {
    pub fn new(modulus: &Ideal) -> Result<ResidueRing> {
        Self::with_bound(modulus, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn with_bound(modulus: &Ideal, bound: u64) -> Result<ResidueRing> {
        if modulus.norm() > &BigInt::from(bound) {
            return Err(Error::EnumerationBoundExceeded { size: modulus.norm().to_string(), bound });
        }
        let field = modulus.field().clone();
        let deg = field.degree();
        let small = SmallLattice::new(modulus);
        let size = modulus.norm().to_usize().unwrap();
        let lattice = Arc::new(DivisorLattice::new(modulus));

        let mut coords = vec![0i64; size * deg];
        for idx in 0..size {
            let mut rest = idx;
            for i in 0..deg {
                coords[idx * deg + i] = (rest / small.strides[i]) as i64;
                rest %= small.strides[i];
            }
        }

        // gcd(⟨x⟩, n) for every residue, as a divisor index, from valuations
        let prime_powers: Vec<Vec<SmallLattice>> = lattice
            .primes()
            .iter()
            .zip(lattice.max_exps())
            .map(|(p, e)| (1..=*e).map(|t| SmallLattice::new(&p.ideal.pow(t))).collect())
            .collect();
        let mut gcd_class = vec![0u32; size];
        let mut exps = vec![0u32; prime_powers.len()];
        for (idx, slot) in gcd_class.iter_mut().enumerate() {
            let x = &coords[idx * deg..(idx + 1) * deg];
            for (i, powers) in prime_powers.iter().enumerate() {
                exps[i] = powers.iter().take_while(|l| l.contains(x)).count() as u32;
            }
            *slot = lattice.index_of_exps(&exps) as u32;
        }

        let units: Vec<usize> = (0..size).filter(|&i| gcd_class[i] == 0).collect();
        let mut unit_pos = vec![NOT_UNIT; size];
        for (p, &u) in units.iter().enumerate() {
            unit_pos[u] = p as u32;
        }

        let mut ring = ResidueRing {
            field,
            modulus: modulus.clone(),
            proj: (0..lattice.len()).map(|_| OnceLock::new()).collect(),
            lattice,
            small,
            size,
            coords,
            gcd_class,
            units,
            unit_pos,
            neg: Vec::new(),
            add_table: None,
            group: OnceLock::new(),
        };
        ring.neg = (0..size).map(|i| ring.sub_slow(0, i) as u32).collect();
        if size <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; size * size];
            for i in 0..size {
                for j in 0..size {
                    table[i * size + j] = ring.add_slow(i, j) as u32;
                }
            }
            ring.add_table = Some(table);
        }
        Ok(ring)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    /// Divisors of the modulus.
    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diag(&self) -> Vec<i64> {
        self.small.diag.clone()
    }

    fn coords_of(&self, idx: usize) -> &[i64] {
        let deg = self.field.degree();
        &self.coords[idx * deg..(idx + 1) * deg]
    }

    /// Canonical representative of a residue index.
    pub fn element(&self, idx: usize) -> AlgInt {
        AlgInt { coords: self.coords_of(idx).iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn index_of(&self, a: &AlgInt) -> Result<usize> {
        let r = self.reduce(a)?;
        let mut v: Vec<i64> = r.coords.iter().map(|x| x.to_i64().unwrap()).collect();
        Ok(self.small.index(&mut v))
    }

    /// Canonical representative: coordinates in `[0, diag_i)`.
    pub fn reduce(&self, a: &AlgInt) -> Result<AlgInt> {
        if a.coords.len() != self.field.degree() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.modulus.reduce(a))
    }

    fn add_slow(&self, i: usize, j: usize) -> usize {
        let mut v: Vec<i64> = self.coords_of(i).iter().zip(self.coords_of(j)).map(|(a, b)| a + b).collect();
        self.small.index(&mut v)
    }

    fn sub_slow(&self, i: usize, j: usize) -> usize {
        let mut v: Vec<i64> = self.coords_of(i).iter().zip(self.coords_of(j)).map(|(a, b)| a - b).collect();
        self.small.index(&mut v)
    }

    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        match &self.add_table {
            Some(t) => t[i * self.size + j] as usize,
            None => self.add_slow(i, j),
        }
    }

    #[inline]
    pub fn neg(&self, i: usize) -> usize {
        self.neg[i] as usize
    }

    #[inline]
    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.field.mul_unchecked(&self.element(i), &self.element(j));
        self.index_of(&p).expect("same field")
    }

    pub fn pow(&self, i: usize, mut e: u64) -> usize {
        let mut base = i;
        let mut acc = self.one_index();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn one_index(&self) -> usize {
        self.index_of(&self.field.one()).expect("same field")
    }

    /// Divisor index of `gcd(⟨x⟩, n)`; the residue 0 maps to `n` itself.
    #[inline]
    pub fn gcd_class(&self, idx: usize) -> usize {
        self.gcd_class[idx] as usize
    }

    #[inline]
    pub fn is_unit_index(&self, idx: usize) -> bool {
        self.unit_pos[idx] != NOT_UNIT
    }

    #[inline]
    pub fn unit_position(&self, idx: usize) -> Option<usize> {
        let p = self.unit_pos[idx];
        (p != NOT_UNIT).then_some(p as usize)
    }

    /// `a` is a unit modulo `n` iff `⟨a⟩ + n = O_K`.
    pub fn is_unit(&self, a: &AlgInt) -> Result<bool> {
        if a.coords.len() != self.field.degree() {
            return Err(Error::FieldMismatch);
        }
        let mut gens: Vec<AlgInt> = self.modulus.hnf().iter().map(|c| AlgInt { coords: c.clone() }).collect();
        gens.push(a.clone());
        Ok(Ideal::from_generators(&self.field, &gens)?.is_unit())
    }

    /// Unit residues in lexicographic order. For the zero ring `O_K/O_K`
    /// the single class counts as a unit.
    pub fn unit_indices(&self) -> &[usize] {
        &self.units
    }

    pub fn units(&self) -> Vec<AlgInt> {
        self.units.iter().map(|&i| self.element(i)).collect()
    }

    pub fn phi(&self) -> usize {
        self.units.len()
    }

    /// Residue index modulo divisor `d` of every residue modulo `n`, using the
    /// numbering a `ResidueRing` over that divisor would use.
    pub fn projection(&self, d: usize) -> &[u32] {
        self.proj[d].get_or_init(|| {
            let lat = SmallLattice::new(self.lattice.ideal(d));
            (0..self.size)
                .map(|idx| {
                    let mut v = self.coords_of(idx).to_vec();
                    lat.index(&mut v) as u32
                })
                .collect()
        })
    }

    /// `x ≡ y (mod d)` for a divisor index `d`.
    #[inline]
    pub fn congruent(&self, x: usize, y: usize, d: usize) -> bool {
        let p = self.projection(d);
        p[x] == p[y]
    }

    fn divisor_index(&self, a: &Ideal) -> Result<usize> {
        if !crate::ideals::Ideal::divides(a, &self.modulus)? {
            return Err(Error::NotADivisor);
        }
        Ok(self.lattice.index_of(a).expect("divisor is enumerated"))
    }

    /// Number of units congruent to `u` modulo the divisor `a`.
    pub fn count_congruent(&self, a: &Ideal, u: &AlgInt) -> Result<u64> {
        let ai = self.divisor_index(a)?;
        let ui = self.index_of(u)?;
        Ok(self.units.iter().filter(|&&x| self.congruent(x, ui, ai)).count() as u64)
    }

    /// Number of units congruent to `u` modulo `a` and to `v` modulo `b`.
    pub fn count_congruent2(&self, a: &Ideal, u: &AlgInt, b: &Ideal, v: &AlgInt) -> Result<u64> {
        let ai = self.divisor_index(a)?;
        let bi = self.divisor_index(b)?;
        let ui = self.index_of(u)?;
        let vi = self.index_of(v)?;
        Ok(self
            .units
            .iter()
            .filter(|&&x| self.congruent(x, ui, ai) && self.congruent(x, vi, bi))
            .count() as u64)
    }

    pub fn unit_group(&self) -> &UnitGroup {
        self.group.get_or_init(|| self.build_unit_group())
    }

    /// Generators with their orders `d₁ | d₂ | … | d_t`, `∏ d_i = φ(n)`.
    pub fn unit_basis(&self) -> Vec<(AlgInt, u64)> {
        self.unit_group().basis.iter().map(|&(g, d)| (self.element(g), d)).collect()
    }

    /// Exponent vector of a unit against the unit basis.
    pub fn dlog(&self, idx: usize) -> Option<&[u64]> {
        let pos = self.unit_position(idx)?;
        Some(&self.unit_group().dlog[pos])
    }

    fn build_unit_group(&self) -> UnitGroup {
        let phi = self.units.len() as u64;
        let one = self.one_index();
        let mut sylow_bases: Vec<Vec<(usize, u64)>> = Vec::new();
        for (q, a) in poly::factor_integer(&BigInt::from(phi)) {
            let q = q.to_u64().unwrap();
            sylow_bases.push(self.sylow_basis(q, q.pow(a), phi));
        }
        // i-th largest component of each Sylow basis combine into one factor
        let depth = sylow_bases.iter().map(Vec::len).max().unwrap_or(0);
        let mut basis = Vec::with_capacity(depth);
        for i in 0..depth {
            let mut g = one;
            let mut d = 1u64;
            for b in &sylow_bases {
                if let Some(&(h, e)) = b.get(i) {
                    g = self.mul(g, h);
                    d *= e;
                }
            }
            basis.push((g, d));
        }
        basis.reverse();
        let exponent = basis.last().map_or(1, |&(_, d)| d);

        let mut dlog: Vec<Option<Vec<u64>>> = vec![None; self.units.len()];
        let mut current: Vec<(usize, Vec<u64>)> = vec![(one, Vec::new())];
        for &(g, d) in &basis {
            let mut next = Vec::with_capacity(current.len() * d as usize);
            for (x, e) in &current {
                let mut y = *x;
                for c in 0..d {
                    let mut ev = e.clone();
                    ev.push(c);
                    next.push((y, ev));
                    y = self.mul(y, g);
                }
            }
            current = next;
        }
        for (x, e) in current {
            let pos = self.unit_pos[x];
            assert!(pos != NOT_UNIT, "basis product is not a unit");
            assert!(dlog[pos as usize].is_none(), "unit basis is not independent");
            dlog[pos as usize] = Some(e);
        }
        let dlog: Vec<Vec<u64>> = dlog
            .into_iter()
            .map(|e| e.expect("unit basis does not generate the unit group"))
            .collect();
        UnitGroup { basis, exponent, dlog }
    }

    /// Basis of the `q`-Sylow subgroup (order `qa`), largest order first.
    ///
    /// Greedy: repeatedly take the element whose order modulo the subgroup
    /// built so far is largest, then correct it by a `q^e`-th root so that its
    /// cyclic group meets the subgroup trivially.
    fn sylow_basis(&self, q: u64, qa: u64, phi: u64) -> Vec<(usize, u64)> {
        let cofactor = phi / qa;
        let mut in_sylow = vec![false; self.size];
        for &u in &self.units {
            in_sylow[self.pow(u, cofactor)] = true;
        }
        let sylow: Vec<usize> = (0..self.size).filter(|&i| in_sylow[i]).collect();
        debug_assert_eq!(sylow.len() as u64, qa);

        let one = self.one_index();
        let mut in_h = vec![false; self.size];
        in_h[one] = true;
        let mut h = vec![one];
        let mut basis = Vec::new();
        while (h.len() as u64) < qa {
            let mut best: Option<(u32, usize)> = None;
            for &g in &sylow {
                if in_h[g] {
                    continue;
                }
                let mut e = 1u32;
                let mut x = self.pow(g, q);
                while !in_h[x] {
                    e += 1;
                    x = self.pow(x, q);
                }
                if best.is_none_or(|(be, _)| e > be) {
                    best = Some((e, g));
                }
            }
            let (e, g) = best.expect("proper subgroup has an element outside it");
            let qe = q.pow(e);
            let target = self.pow(g, qe);
            let root = *h
                .iter()
                .find(|&&x| self.pow(x, qe) == target)
                .expect("greedy choice guarantees a root inside the subgroup");
            let g = self.mul(g, self.pow(root, qa - 1));
            let mut next = Vec::with_capacity(h.len() * qe as usize);
            let mut step = one;
            for _ in 0..qe {
                for &x in &h {
                    next.push(self.mul(x, step));
                }
                step = self.mul(step, g);
            }
            for &x in &next {
                in_h[x] = true;
            }
            h = next;
            basis.push((g, qe));
        }
        basis
    }
}
