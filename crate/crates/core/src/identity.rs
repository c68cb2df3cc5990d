//! Both sides of the character-twisted Menon-type identity
//!
//! ```text
//! Σ_{a ∈ ((O_K/n)^*)^k, Σa unit} Σ_{b ∈ (O_K/n)^s} f(gcd(Σa − r, b₁, …, b_s, n)) χ(a₁)
//!   = μ(d)^{k−1} ψ(r) φ(n₀^k / d^{k−1}) φ_k(n/n₀) Σ_{d|e|n} (μ∗f)(e)/φ(e) · (N(n)/N(e))^s
//! ```
//!
//! where `d` is the conductor of `χ`, `ψ` the primitive character inducing it
//! and `n₀` the part of `n` supported on the primes of `d`.
//!
//! The left side has three evaluators of increasing speed. Each is split into
//! a kernel holding the counts that do not depend on the remaining parameters
//! and a cheap weighting step, so parameter sweeps can share kernels:
//!
//! * naive: literal enumeration of every `(a, b)`; kernel over `(k, s, r)`.
//! * convolution: `f = (μ∗f)∗1` collapses the `b`-sum; kernel over `(k, r)`.
//! * dp: additive convolution of the unit indicator; kernel over `(χ, k)`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    alternating_sum, dirichlet_convolve, lattice_moebius, lattice_phi, lattice_phi_k, lattice_sigma,
    n_zero_index, unit_sum_distribution, FuncSpec, IdealFunc,
};
use crate::characters::Character;
use crate::cyclotomic::{CycInt, CycJson};
use crate::error::{Error, Result};
use crate::ideals::{DivisorLattice, Ideal, IdealLiteral};
use crate::numfield::AlgInt;
use crate::residue::ResidueRing;

pub const DEFAULT_NAIVE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_DP_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    Naive,
    Convolution,
    Dp,
}

impl Evaluator {
    pub const ALL: [Evaluator; 3] = [Evaluator::Naive, Evaluator::Convolution, Evaluator::Dp];

    pub fn name(self) -> &'static str {
        match self {
            Evaluator::Naive => "naive",
            Evaluator::Convolution => "convolution",
            Evaluator::Dp => "dp",
        }
    }

    pub fn parse(text: &str) -> Result<Evaluator> {
        match text {
            "naive" => Ok(Evaluator::Naive),
            "convolution" | "conv" => Ok(Evaluator::Convolution),
            "dp" => Ok(Evaluator::Dp),
            _ => Err(Error::Parse(format!("unknown evaluator '{text}'"))),
        }
    }

    /// Work estimate compared against the budget.
    pub fn cost(self, norm: u64, k: u32, s: u32) -> u128 {
        let n = norm as u128;
        match self {
            Evaluator::Naive => n.saturating_pow(k + s),
            Evaluator::Convolution => n.saturating_pow(k),
            Evaluator::Dp => n.saturating_mul(n).saturating_mul(k as u128),
        }
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Iteration budgets. The naive budget also bounds the convolution
/// evaluator, which enumerates the same `a`-tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub naive: u64,
    pub dp: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { naive: DEFAULT_NAIVE_BUDGET, dp: DEFAULT_DP_BUDGET }
    }
}

impl Budgets {
    pub fn limit(&self, ev: Evaluator) -> u64 {
        match ev {
            Evaluator::Naive | Evaluator::Convolution => self.naive,
            Evaluator::Dp => self.dp,
        }
    }

    pub fn allows(&self, ev: Evaluator, norm: u64, k: u32, s: u32) -> bool {
        ev.cost(norm, k, s) <= self.limit(ev) as u128
    }

    pub fn check(&self, ev: Evaluator, norm: u64, k: u32, s: u32) -> Result<()> {
        if self.allows(ev, norm, k, s) {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                evaluator: ev.name(),
                needed: ev.cost(norm, k, s).to_string(),
                budget: self.limit(ev),
            })
        }
    }
}

/// One point of the identity: modulus, tuple lengths, shift, character and
/// weight function.
#[derive(Debug, Clone)]
pub struct IdentityParams {
    pub ring: Arc<ResidueRing>,
    pub k: u32,
    pub s: u32,
    pub r: AlgInt,
    pub chi: Character,
    pub f: IdealFunc,
    r_index: usize,
    h: IdealFunc,
}

impl IdentityParams {
    pub fn new(ring: &Arc<ResidueRing>, k: u32, s: u32, r: AlgInt, chi: &Character, f: IdealFunc) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be positive".into()));
        }
        if !Arc::ptr_eq(chi.ring(), ring) {
            return Err(Error::InvalidParams("character is defined modulo a different ring".into()));
        }
        if f.lattice().modulus() != ring.modulus() {
            return Err(Error::InvalidParams("f is tabulated on a different modulus".into()));
        }
        let r_index = ring.index_of(&r)?;
        if !ring.is_unit_index(r_index) {
            return Err(Error::NotCoprime);
        }
        let mu = FuncSpec::Moebius.tabulate(ring.lattice())?;
        let h = dirichlet_convolve(&mu, &f)?;
        Ok(IdentityParams { ring: ring.clone(), k, s, r, chi: chi.clone(), f, r_index, h })
    }

    pub fn r_index(&self) -> usize {
        self.r_index
    }

    /// `μ ∗ f` on the divisors of `n`.
    pub fn mu_star_f(&self) -> &IdealFunc {
        &self.h
    }

    pub fn norm(&self) -> u64 {
        self.ring.size() as u64
    }

    /// `B(g) = Σ_{e | g} (μ∗f)(e) (N(n)/N(e))^s` for every divisor `g`.
    pub fn b_table(&self) -> Vec<BigInt> {
        b_table(&self.h, self.s)
    }
}

fn b_table(h: &IdealFunc, s: u32) -> Vec<BigInt> {
    let lat = h.lattice();
    let n_norm = lat.norm(lat.top_index());
    let weight: Vec<BigInt> = (0..lat.len()).map(|e| (n_norm / lat.norm(e)).pow(s)).collect();
    (0..lat.len()).map(|g| lat.divisors_of(g).map(|e| h.at(e) * &weight[e]).sum()).collect()
}

fn gcd_table(lat: &DivisorLattice) -> Vec<u16> {
    let t = lat.len();
    let mut tab = vec![0u16; t * t];
    for i in 0..t {
        for j in 0..t {
            tab[i * t + j] = lat.gcd(i, j) as u16;
        }
    }
    tab
}

/// Calls `visit(first, sum)` for every unit `k`-tuple, with `first` the
/// residue index of `a₁`.
fn for_each_unit_tuple(ring: &ResidueRing, k: u32, mut visit: impl FnMut(usize, usize)) {
    let units = ring.unit_indices();
    let k = k as usize;
    if units.is_empty() {
        return;
    }
    let mut pos = vec![0usize; k];
    // partial[i] = a₁ + ⋯ + a_i
    let mut partial = vec![ring.zero_index(); k + 1];
    for i in 0..k {
        partial[i + 1] = ring.add(partial[i], units[0]);
    }
    loop {
        visit(units[pos[0]], partial[k]);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < units.len() {
                break;
            }
            pos[i] = 0;
        }
        for j in i..k {
            partial[j + 1] = ring.add(partial[j], units[pos[j]]);
        }
    }
}

/// Weighs `counts[unit position of a₁][divisor]` by `χ(a₁)` and a divisor
/// weight.
fn weigh_by_first(chi: &Character, counts: &[u64], weights: &[BigInt]) -> CycInt {
    let ring = chi.ring();
    let t = weights.len();
    let m = chi.order() as usize;
    let mut agg = vec![0u128; m * t];
    for (pos, &a) in ring.unit_indices().iter().enumerate() {
        let j = chi.value_exp(a).expect("unit") as usize;
        for g in 0..t {
            agg[j * t + g] += counts[pos * t + g] as u128;
        }
    }
    collect(m, t, &agg, weights)
}

fn collect(m: usize, t: usize, agg: &[u128], weights: &[BigInt]) -> CycInt {
    let coeffs = (0..m)
        .map(|j| {
            (0..t)
                .filter(|&g| agg[j * t + g] != 0)
                .map(|g| BigInt::from(agg[j * t + g]) * &weights[g])
                .sum()
        })
        .collect();
    CycInt::from_coeffs(m as u64, coeffs)
}

/// Literal enumeration counts: for every `a₁` and divisor `g`, the number of
/// `(a, b)` configurations with that first coordinate and
/// `gcd(Σa − r, b₁, …, b_s, n) = g`.
#[derive(Debug, Clone)]
pub struct NaiveKernel {
    k: u32,
    s: u32,
    r_index: usize,
    counts: Vec<u64>,
}

impl NaiveKernel {
    pub fn build(ring: &ResidueRing, k: u32, s: u32, r_index: usize) -> NaiveKernel {
        let lat = ring.lattice();
        let t = lat.len();
        let gcd = gcd_table(lat);
        let size = ring.size();
        let mut counts = vec![0u64; ring.phi() * t];
        let b_classes: Vec<usize> = (0..size).map(|b| ring.gcd_class(b)).collect();
        let mut b_pos = vec![0usize; s as usize];
        for_each_unit_tuple(ring, k, |a1, sum| {
            if !ring.is_unit_index(sum) {
                return;
            }
            let row = ring.unit_position(a1).unwrap() * t;
            let c = ring.gcd_class(ring.sub(sum, r_index));
            b_pos.iter_mut().for_each(|p| *p = 0);
            loop {
                let g = b_pos.iter().fold(c, |g, &b| gcd[g * t + b_classes[b]] as usize);
                counts[row + g] += 1;
                let mut i = b_pos.len();
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    b_pos[i] += 1;
                    if b_pos[i] < size {
                        break;
                    }
                    b_pos[i] = 0;
                }
            }
        });
        NaiveKernel { k, s, r_index, counts }
    }

    pub fn evaluate(&self, p: &IdentityParams) -> CycInt {
        assert!(p.k == self.k && p.s == self.s && p.r_index == self.r_index, "kernel built for other parameters");
        weigh_by_first(&p.chi, &self.counts, p.f.values())
    }
}

/// Counts over unit `k`-tuples with unit sum, by `a₁` and `gcd(Σa − r, n)`.
#[derive(Debug, Clone)]
pub struct ConvolutionKernel {
    k: u32,
    r_index: usize,
    counts: Vec<u64>,
}

impl ConvolutionKernel {
    pub fn build(ring: &ResidueRing, k: u32, r_index: usize) -> ConvolutionKernel {
        let t = ring.lattice().len();
        let mut counts = vec![0u64; ring.phi() * t];
        for_each_unit_tuple(ring, k, |a1, sum| {
            if ring.is_unit_index(sum) {
                let row = ring.unit_position(a1).unwrap() * t;
                counts[row + ring.gcd_class(ring.sub(sum, r_index))] += 1;
            }
        });
        ConvolutionKernel { k, r_index, counts }
    }

    pub fn evaluate(&self, p: &IdentityParams) -> CycInt {
        assert!(p.k == self.k && p.r_index == self.r_index, "kernel built for other parameters");
        weigh_by_first(&p.chi, &self.counts, &p.b_table())
    }
}

/// `W[t][j]`: number of unit `k`-tuples with sum `t` and `χ(a₁) = ζ^j`.
#[derive(Debug, Clone)]
pub struct DpKernel {
    k: u32,
    chi_index: usize,
    m: usize,
    w: Vec<u128>,
}

impl DpKernel {
    pub fn build(chi: &Character, k: u32) -> DpKernel {
        let ring = chi.ring();
        let m = chi.order() as usize;
        let tail = unit_sum_distribution(ring, k - 1);
        let mut w = vec![0u128; ring.size() * m];
        for &a in ring.unit_indices() {
            let j = chi.value_exp(a).unwrap() as usize;
            for (x, &c) in tail.iter().enumerate() {
                if c != 0 {
                    w[ring.add(a, x) * m + j] += c;
                }
            }
        }
        DpKernel { k, chi_index: chi.index(), m, w }
    }

    /// Total weighted count per residue sum, as roots-of-unity buckets.
    pub fn row(&self, t: usize) -> &[u128] {
        &self.w[t * self.m..(t + 1) * self.m]
    }

    pub fn order(&self) -> u64 {
        self.m as u64
    }

    pub fn evaluate(&self, p: &IdentityParams) -> CycInt {
        assert!(p.k == self.k && p.chi.index() == self.chi_index, "kernel built for other parameters");
        let ring = &p.ring;
        let t = ring.lattice().len();
        let m = self.m;
        let mut agg = vec![0u128; m * t];
        for &u in ring.unit_indices() {
            let g = ring.gcd_class(ring.sub(u, p.r_index));
            for (j, &c) in self.row(u).iter().enumerate() {
                agg[j * t + g] += c;
            }
        }
        collect(m, t, &agg, &p.b_table())
    }
}

pub fn lhs_naive(p: &IdentityParams, budgets: &Budgets) -> Result<CycInt> {
    budgets.check(Evaluator::Naive, p.norm(), p.k, p.s)?;
    Ok(NaiveKernel::build(&p.ring, p.k, p.s, p.r_index).evaluate(p))
}

pub fn lhs_convolution(p: &IdentityParams, budgets: &Budgets) -> Result<CycInt> {
    budgets.check(Evaluator::Convolution, p.norm(), p.k, p.s)?;
    Ok(ConvolutionKernel::build(&p.ring, p.k, p.r_index).evaluate(p))
}

pub fn lhs_dp(p: &IdentityParams, budgets: &Budgets) -> Result<CycInt> {
    budgets.check(Evaluator::Dp, p.norm(), p.k, p.s)?;
    Ok(DpKernel::build(&p.chi, p.k).evaluate(p))
}

/// The named factors of the closed form.
#[derive(Debug, Clone)]
pub struct RhsBreakdown {
    pub conductor: Ideal,
    pub n_zero: Ideal,
    pub n_over_n_zero: Ideal,
    pub psi_r: CycInt,
    pub mu_power: BigInt,
    pub phi_factor: BigInt,
    pub phi_k_factor: BigInt,
    /// `(e, (μ∗f)(e)/φ(e) · (N(n)/N(e))^s)` for `d | e | n`.
    pub e_terms: Vec<(Ideal, BigRational)>,
    pub scalar: BigInt,
    pub value: CycInt,
}

/// `φ(n₀^k / d^{k−1})` from exponents; the ideal need not divide `n`.
fn phi_of_power_quotient(lat: &DivisorLattice, d: usize, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for ((p, &vd), &vn) in lat.primes().iter().zip(lat.exps(d)).zip(lat.max_exps()) {
        if vd == 0 {
            continue;
        }
        let a = k * vn - (k - 1) * vd;
        let q = p.norm();
        acc *= q.pow(a - 1) * (q - 1u32);
    }
    acc
}

fn mu_power(lat: &DivisorLattice, d: usize, k: u32) -> BigInt {
    if k == 1 {
        BigInt::one()
    } else {
        BigInt::from(lattice_moebius(lat, d)).pow(k - 1)
    }
}

/// Conductor data shared by both closed forms:
/// `(d, n₀, μ(d)^{k−1}, φ(n₀^k/d^{k−1}), φ_k(n/n₀), ψ(r))`.
fn conductor_factors(p: &IdentityParams) -> Result<(usize, usize, BigInt, BigInt, BigInt, CycInt)> {
    let lat = p.ring.lattice();
    let d = p.chi.conductor_index();
    let n0 = n_zero_index(lat, d);
    let psi_r = p.chi.primitive_eval(&p.r)?;
    let phi_k = lattice_phi_k(lat, lat.quotient(lat.top_index(), n0), p.k)?;
    Ok((d, n0, mu_power(lat, d, p.k), phi_of_power_quotient(lat, d, p.k), phi_k, psi_r))
}

pub fn rhs_breakdown(p: &IdentityParams) -> Result<RhsBreakdown> {
    let lat = p.ring.lattice();
    let (d, n0, mu_pow, phi_factor, phi_k_factor, psi_r) = conductor_factors(p)?;
    let top = lat.top_index();
    let n_norm = lat.norm(top);
    let mut e_terms = Vec::new();
    let mut esum = BigRational::zero();
    for e in (0..lat.len()).filter(|&e| lat.divides(d, e)) {
        let count = (n_norm / lat.norm(e)).pow(p.s);
        let term = BigRational::new(p.h.at(e) * count, lattice_phi(lat, e));
        esum += &term;
        e_terms.push((lat.ideal(e).clone(), term));
    }
    let scalar = esum * BigRational::from_integer(&mu_pow * &phi_factor * &phi_k_factor);
    if !scalar.is_integer() {
        return Err(Error::NonIntegerScalar(scalar.to_string()));
    }
    let scalar = scalar.to_integer();
    let value = psi_r.scale(&scalar);
    Ok(RhsBreakdown {
        conductor: lat.ideal(d).clone(),
        n_zero: lat.ideal(n0).clone(),
        n_over_n_zero: lat.ideal(lat.quotient(top, n0)).clone(),
        psi_r,
        mu_power: mu_pow,
        phi_factor,
        phi_k_factor,
        e_terms,
        scalar,
        value,
    })
}

pub fn rhs_closed(p: &IdentityParams) -> Result<CycInt> {
    Ok(rhs_breakdown(p)?.value)
}

/// Closed form for `f = N`, with the divisor sum collapsed to `σ_s(n/d)`.
pub fn rhs_corollary_norm(p: &IdentityParams) -> Result<CycInt> {
    if !p.f.is_norm() {
        return Err(Error::WrongF);
    }
    let lat = p.ring.lattice();
    let (d, _, mu_pow, phi_factor, phi_k_factor, psi_r) = conductor_factors(p)?;
    let sigma = lattice_sigma(lat, lat.quotient(lat.top_index(), d), p.s);
    Ok(psi_r.scale(&(mu_pow * phi_factor * phi_k_factor * sigma)))
}

fn divisor_index(ring: &ResidueRing, a: &Ideal) -> Result<usize> {
    if !a.divides(ring.modulus())? {
        return Err(Error::NotADivisor);
    }
    Ok(ring.lattice().index_of(a).expect("divisor is enumerated"))
}

fn unit_r(ring: &ResidueRing, r: &AlgInt) -> Result<usize> {
    let ri = ring.index_of(r)?;
    if !ring.is_unit_index(ri) {
        return Err(Error::NotCoprime);
    }
    Ok(ri)
}

/// `N_k(n, e, g, d, u)` by enumerating unit `k`-tuples.
pub fn nk_bruteforce(
    ring: &ResidueRing,
    e: &Ideal,
    g: &Ideal,
    d: &Ideal,
    u: &AlgInt,
    k: u32,
    r: &AlgInt,
) -> Result<BigInt> {
    let (ei, gi, di) = (divisor_index(ring, e)?, divisor_index(ring, g)?, divisor_index(ring, d)?);
    let ui = ring.index_of(u)?;
    let ri = unit_r(ring, r)?;
    let zero = ring.zero_index();
    let mut count = 0u64;
    for_each_unit_tuple(ring, k, |a1, sum| {
        if ring.congruent(a1, ui, di) && ring.congruent(sum, ri, ei) && ring.congruent(sum, zero, gi) {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// Fast exact `N_k` counts through the distribution of `a₂ + ⋯ + a_k`.
#[derive(Debug, Clone)]
pub struct NkCounter<'a> {
    ring: &'a ResidueRing,
    k: u32,
    tail: Vec<u128>,
}

impl<'a> NkCounter<'a> {
    pub fn new(ring: &'a ResidueRing, k: u32) -> NkCounter<'a> {
        assert!(k >= 1);
        NkCounter { ring, k, tail: unit_sum_distribution(ring, k - 1) }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of unit `k`-tuples with `a₁ ≡ u (mod d)` by residue sum.
    pub fn sums(&self, d: usize, u: usize) -> Vec<u128> {
        let ring = self.ring;
        let mut out = vec![0u128; ring.size()];
        for &a in ring.unit_indices() {
            if !ring.congruent(a, u, d) {
                continue;
            }
            for (x, &c) in self.tail.iter().enumerate() {
                if c != 0 {
                    out[ring.add(a, x)] += c;
                }
            }
        }
        out
    }

    /// `N_k` from a `sums` table: sums `≡ r (mod e)` and `≡ 0 (mod g)`.
    pub fn select(&self, sums: &[u128], e: usize, g: usize, r: usize) -> u128 {
        let ring = self.ring;
        let zero = ring.zero_index();
        sums.iter()
            .enumerate()
            .filter(|&(t, &c)| c != 0 && ring.congruent(t, r, e) && ring.congruent(t, zero, g))
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn count(&self, e: usize, g: usize, d: usize, u: usize, r: usize) -> u128 {
        self.select(&self.sums(d, u), e, g, r)
    }
}

/// `φ(n)/(φ(e)φ(g)) Σ_{j|e} μ(j) Σ_{t|g} μ(t) N_{k−1}(n, j, t, d, u)`
pub fn nk_recursion_rhs(
    ring: &ResidueRing,
    e: &Ideal,
    g: &Ideal,
    d: &Ideal,
    u: &AlgInt,
    k: u32,
    r: &AlgInt,
) -> Result<BigInt> {
    let (ei, gi, di) = (divisor_index(ring, e)?, divisor_index(ring, g)?, divisor_index(ring, d)?);
    let ui = ring.index_of(u)?;
    let ri = unit_r(ring, r)?;
    let lower = NkCounter::new(ring, k.checked_sub(1).filter(|&x| x >= 1).ok_or_else(|| {
        Error::InvalidParams("recursion needs k >= 2".into())
    })?);
    nk_recursion_index(&lower, &lower.sums(di, ui), ei, gi, ri)
}

/// Recursion right side from the `(k−1)` sums table for fixed `(d, u)`.
pub fn nk_recursion_index(lower: &NkCounter, sums: &[u128], e: usize, g: usize, r: usize) -> Result<BigInt> {
    let ring = lower.ring;
    let lat = ring.lattice();
    if !lat.coprime(e, g) {
        return Err(Error::NotCoprime);
    }
    let mut acc = BigInt::zero();
    for j in lat.divisors_of(e) {
        let mj = lattice_moebius(lat, j);
        if mj == 0 {
            continue;
        }
        for t in lat.divisors_of(g) {
            let mt = lattice_moebius(lat, t);
            if mt != 0 {
                acc += BigInt::from(mj * mt) * BigInt::from(lower.select(sums, j, t, r));
            }
        }
    }
    let value = BigRational::new(acc * BigInt::from(ring.phi()), lattice_phi(lat, e) * lattice_phi(lat, g));
    crate::arith::rational_to_integer(value, "N_k recursion")
}

/// Representatives of `(O_K/d)^*` among the units modulo `n`.
pub fn units_mod_divisor(ring: &ResidueRing, d: usize) -> Vec<usize> {
    let proj = ring.projection(d);
    let mut seen = std::collections::HashSet::new();
    ring.unit_indices().iter().copied().filter(|&a| seen.insert(proj[a])).collect()
}

/// `Σ_{u ∈ (O_K/d)^*} ψ(u) N_k(n, e, g, d, u)` by counting, with `d` the
/// conductor of `χ`.
pub fn nk_charsum_bruteforce(ring: &ResidueRing, e: &Ideal, g: &Ideal, k: u32, r: &AlgInt, chi: &Character) -> Result<CycInt> {
    let (ei, gi) = (divisor_index(ring, e)?, divisor_index(ring, g)?);
    let ri = unit_r(ring, r)?;
    let d = chi.conductor_index();
    let counter = NkCounter::new(ring, k);
    let mut acc = CycInt::zero(chi.order());
    for u in units_mod_divisor(ring, d) {
        let n = counter.count(ei, gi, d, u, ri);
        acc.add_term(chi.value_exp(u).unwrap(), &BigInt::from(n));
    }
    Ok(acc)
}

/// Closed product form of the character-weighted `N_k` sum.
pub fn nk_charsum_closed(ring: &ResidueRing, e: &Ideal, g: &Ideal, k: u32, r: &AlgInt, chi: &Character) -> Result<CycInt> {
    let (ei, gi) = (divisor_index(ring, e)?, divisor_index(ring, g)?);
    if k < 2 {
        return Err(Error::InvalidParams("closed form needs k >= 2".into()));
    }
    nk_charsum_closed_index(chi, ei, gi, k, r)
}

pub fn nk_charsum_closed_index(chi: &Character, e: usize, g: usize, k: u32, r: &AlgInt) -> Result<CycInt> {
    let ring = chi.ring();
    let lat = ring.lattice();
    if !lat.coprime(e, g) {
        return Err(Error::NotCoprime);
    }
    unit_r(ring, r)?;
    let d = chi.conductor_index();
    if !lat.divides(d, e) {
        return Ok(CycInt::zero(chi.order()));
    }
    let psi_r = chi.primitive_eval(r)?;
    let mut acc = BigRational::from_integer(BigInt::from(ring.phi()).pow(k) * mu_power(lat, d, k));
    acc /= BigRational::from_integer(lattice_phi(lat, e) * lattice_phi(lat, g));
    for (i, p) in lat.primes().iter().enumerate() {
        let q = p.norm();
        if lat.exps(d)[i] > 0 {
            acc /= BigRational::from_integer((q - 1u32).pow(k - 1));
        } else if lat.exps(e)[i] > 0 {
            acc *= alternating_sum(q, k);
        }
        if lat.exps(g)[i] > 0 {
            acc *= alternating_sum(q, k - 1);
        }
    }
    if !acc.is_integer() {
        return Err(Error::NonIntegerScalar(acc.to_string()));
    }
    Ok(psi_r.scale(&acc.to_integer()))
}

/// Outcome of checking one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub field: String,
    pub n: IdealLiteral,
    #[serde(rename = "N_n")]
    pub n_norm: u64,
    pub k: u32,
    pub s: u32,
    pub r: Vec<serde_json::Value>,
    pub char_index: usize,
    pub conductor_norm: u64,
    pub f: String,
    pub lhs: CycJson,
    pub rhs: CycJson,
    pub equal: bool,
    pub evaluators: Vec<String>,
    pub ms: f64,
}

fn coords_json(a: &AlgInt) -> Vec<serde_json::Value> {
    a.coords
        .iter()
        .map(|c| match c.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(c.to_string()),
        })
        .collect()
}

/// Left side values that have already been computed for a point, by
/// evaluator. Lets callers supply kernel-based values from caches.
pub type LhsValues = Vec<(Evaluator, CycInt)>;

/// Compares the supplied left side values with each other and with the
/// closed forms. Disagreement between two left side evaluators is an error;
/// disagreement with the right side is reported through `equal`. A nonzero
/// `rhs_shift` is added to the closed form to exercise the mismatch path.
pub fn assemble_record(
    p: &IdentityParams,
    lhs: LhsValues,
    started: Instant,
    rhs_shift: i64,
) -> Result<VerificationRecord> {
    let (first_ev, first) = lhs.first().cloned().ok_or_else(|| Error::InvalidParams("no left side evaluator".into()))?;
    for (ev, v) in &lhs[1..] {
        if *v != first {
            return Err(Error::InternalInconsistency(format!(
                "{first_ev} gives {first} but {ev} gives {v} at n={}, k={}, s={}, char {}",
                p.ring.modulus(),
                p.k,
                p.s,
                p.chi.index()
            )));
        }
    }
    let rhs = rhs_closed(p)?.add(&CycInt::from_int(1, rhs_shift));
    let mut equal = first == rhs;
    let mut evaluators: Vec<String> = lhs.iter().map(|(e, _)| e.name().to_string()).collect();
    evaluators.push("closed".into());
    if p.f.is_norm() {
        equal &= rhs_corollary_norm(p)? == rhs;
        evaluators.push("corollary".into());
    }
    let lat = p.ring.lattice();
    Ok(VerificationRecord {
        field: p.ring.field().name().to_string(),
        n: IdealLiteral::of(p.ring.modulus()),
        n_norm: p.norm(),
        k: p.k,
        s: p.s,
        r: coords_json(&p.r),
        char_index: p.chi.index(),
        conductor_norm: lat.norm(p.chi.conductor_index()).to_u64().expect("small conductor"),
        f: p.f.name().to_string(),
        lhs: first.canonical(),
        rhs: rhs.canonical(),
        equal,
        evaluators,
        ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs the selected evaluators and compares them with the closed forms.
pub fn verify(p: &IdentityParams, evaluators: &[Evaluator], budgets: &Budgets) -> Result<VerificationRecord> {
    let started = Instant::now();
    let mut lhs = Vec::new();
    for &ev in evaluators {
        let v = match ev {
            Evaluator::Naive => lhs_naive(p, budgets)?,
            Evaluator::Convolution => lhs_convolution(p, budgets)?,
            Evaluator::Dp => lhs_dp(p, budgets)?,
        };
        lhs.push((ev, v));
    }
    assemble_record(p, lhs, started, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::all_characters;
    use crate::numfield::NumberField;

    fn ring(poly: &[i64], m: i64) -> Arc<ResidueRing> {
        let k = Arc::new(NumberField::from_i64(poly).unwrap());
        Arc::new(ResidueRing::new(&Ideal::from_int(&k, m).unwrap()).unwrap())
    }

    fn params(ring: &Arc<ResidueRing>, k: u32, s: u32, chi: usize, f: FuncSpec) -> IdentityParams {
        let chi = Character::from_index(ring, chi).unwrap();
        let f = f.tabulate(ring.lattice()).unwrap();
        IdentityParams::new(ring, k, s, ring.field().one(), &chi, f).unwrap()
    }

    fn all_lhs(p: &IdentityParams) -> Vec<CycInt> {
        let b = Budgets::default();
        vec![lhs_naive(p, &b).unwrap(), lhs_convolution(p, &b).unwrap(), lhs_dp(p, &b).unwrap()]
    }

    #[test]
    fn gaussian_three() {
        let r = ring(&[1, 0, 1], 3);
        let p1 = params(&r, 1, 0, 0, FuncSpec::Norm);
        for v in all_lhs(&p1) {
            assert_eq!(v, CycInt::from_int(1, 16));
        }
        assert_eq!(rhs_closed(&p1).unwrap(), CycInt::from_int(1, 16));
        let p2 = params(&r, 2, 0, 0, FuncSpec::Norm);
        for v in all_lhs(&p2) {
            assert_eq!(v, CycInt::from_int(1, 112));
        }
        assert_eq!(rhs_closed(&p2).unwrap(), CycInt::from_int(1, 112));
        assert_eq!(rhs_corollary_norm(&p2).unwrap(), CycInt::from_int(1, 112));
        let rec = verify(&p2, &Evaluator::ALL, &Budgets::default()).unwrap();
        assert!(rec.equal);
    }

    #[test]
    fn classical_menon() {
        let r = ring(&[0, 1], 4);
        let p = params(&r, 1, 0, 0, FuncSpec::Norm);
        assert_eq!(lhs_convolution(&p, &Budgets::default()).unwrap(), CycInt::from_int(1, 6));
        assert_eq!(rhs_closed(&p).unwrap(), CycInt::from_int(1, 6));
        let r12 = ring(&[0, 1], 12);
        let p = params(&r12, 1, 0, 0, FuncSpec::Norm);
        assert_eq!(lhs_naive(&p, &Budgets::default()).unwrap(), CycInt::from_int(1, 24));
    }

    #[test]
    fn induced_character_mod_twelve() {
        let r12 = ring(&[0, 1], 12);
        let chi = all_characters(&r12).into_iter().find(|c| c.conductor().norm() == &BigInt::from(4)).unwrap();
        let f = FuncSpec::Norm.tabulate(r12.lattice()).unwrap();
        let p = IdentityParams::new(&r12, 1, 0, r12.field().one(), &chi, f).unwrap();
        assert_eq!(rhs_corollary_norm(&p).unwrap(), CycInt::from_int(1, 8));
        for v in all_lhs(&p) {
            assert_eq!(v, CycInt::from_int(1, 8));
        }
    }

    #[test]
    fn degenerate_modulus() {
        let k = Arc::new(NumberField::from_i64(&[1, 0, 1]).unwrap());
        let r = Arc::new(ResidueRing::new(&Ideal::unit(&k)).unwrap());
        let p = params(&r, 2, 1, 0, FuncSpec::Sigma(1));
        for v in all_lhs(&p) {
            assert_eq!(v, CycInt::from_int(1, 1));
        }
        assert!(verify(&p, &Evaluator::ALL, &Budgets::default()).unwrap().equal);
    }

    #[test]
    fn evaluators_agree_with_closed_form() {
        for (poly, m) in [(&[1i64, 0, 1][..], 3), (&[1, 0, 1][..], 4), (&[5, 0, 1][..], 6), (&[0, 1][..], 9)] {
            let r = ring(poly, m);
            for chi in 0..r.phi() {
                for k in 1..=2 {
                    for s in 0..=1 {
                        for f in [FuncSpec::Norm, FuncSpec::One, FuncSpec::Sigma(1)] {
                            let p = params(&r, k, s, chi, f);
                            let rec = verify(&p, &Evaluator::ALL, &Budgets::default()).unwrap();
                            assert!(rec.equal, "{rec:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_mu_factor() {
        // a character modulo 9 with conductor 9 has μ(d) = 0
        let r = ring(&[0, 1], 9);
        let chi = all_characters(&r).into_iter().find(|c| c.conductor().norm() == &BigInt::from(9)).unwrap();
        let f = FuncSpec::Norm.tabulate(r.lattice()).unwrap();
        let p = IdentityParams::new(&r, 2, 0, r.field().one(), &chi, f).unwrap();
        assert!(rhs_closed(&p).unwrap().is_zero());
        assert!(lhs_dp(&p, &Budgets::default()).unwrap().is_zero());
    }

    #[test]
    fn budgets_are_enforced() {
        let r = ring(&[1, 0, 1], 3);
        let p = params(&r, 3, 2, 0, FuncSpec::Norm);
        let tight = Budgets { naive: 1000, dp: 10 };
        assert!(matches!(lhs_naive(&p, &tight), Err(Error::BudgetExceeded { evaluator: "naive", .. })));
        assert!(matches!(lhs_dp(&p, &tight), Err(Error::BudgetExceeded { evaluator: "dp", .. })));
        assert!(lhs_convolution(&p, &tight).is_ok());
    }

    #[test]
    fn non_unit_shift_rejected() {
        let r = ring(&[1, 0, 1], 3);
        let chi = Character::trivial(&r);
        let f = FuncSpec::Norm.tabulate(r.lattice()).unwrap();
        let three = r.field().from_int(3);
        assert_eq!(IdentityParams::new(&r, 1, 0, three, &chi, f).unwrap_err(), Error::NotCoprime);
    }

    #[test]
    fn nk_sums() {
        let r = ring(&[1, 0, 1], 3);
        let k = r.field().clone();
        let one = k.one();
        let unit = Ideal::unit(&k);
        let three = r.modulus().clone();
        assert_eq!(nk_bruteforce(&r, &three, &unit, &unit, &one, 2, &one).unwrap(), BigInt::from(7));
        assert_eq!(nk_recursion_rhs(&r, &three, &unit, &unit, &one, 2, &one).unwrap(), BigInt::from(7));
        assert_eq!(nk_bruteforce(&r, &three, &three, &unit, &one, 2, &one).unwrap(), BigInt::from(0));
        assert_eq!(nk_recursion_rhs(&r, &three, &three, &unit, &one, 2, &one), Err(Error::NotCoprime));
        let chi = Character::trivial(&r);
        assert_eq!(nk_charsum_closed(&r, &three, &unit, 2, &one, &chi).unwrap(), CycInt::from_int(1, 7));
        assert_eq!(nk_charsum_bruteforce(&r, &three, &unit, 2, &one, &chi).unwrap(), CycInt::from_int(1, 7));
        assert_eq!(nk_charsum_closed(&r, &unit, &unit, 2, &one, &chi).unwrap(), CycInt::from_int(1, 64));
        // k = 1 with g = O_K: φ(n)/φ([d, e])
        assert_eq!(nk_bruteforce(&r, &three, &unit, &unit, &one, 1, &one).unwrap(), BigInt::from(1));
        let primitive = Character::from_index(&r, 1).unwrap();
        assert!(nk_charsum_closed(&r, &unit, &unit, 2, &one, &primitive).unwrap().is_zero());
    }
}
