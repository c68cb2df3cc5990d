//! Arithmetical functions on integral ideals.
//!
//! The multiplicative functions are evaluated from prime factorizations;
//! `IdealFunc` tabulates an arbitrary function on the divisors of a working
//! modulus so it can be convolved and plugged into the identity evaluators.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{DivisorLattice, Ideal, IdealLiteral};
use crate::residue::ResidueRing;

/// `(N(p), v_p)` for each prime of an ideal.
fn prime_powers(a: &Ideal) -> Vec<(BigInt, u32)> {
    a.factor().iter().map(|(p, e)| (p.norm().clone(), *e)).collect()
}

fn lattice_prime_powers(lat: &DivisorLattice, i: usize) -> Vec<(BigInt, u32)> {
    lat.primes()
        .iter()
        .zip(lat.exps(i))
        .filter(|(_, &e)| e > 0)
        .map(|(p, &e)| (p.norm().clone(), e))
        .collect()
}

fn moebius_of(pp: &[(BigInt, u32)]) -> i64 {
    if pp.iter().any(|(_, e)| *e > 1) {
        0
    } else if pp.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn phi_of(pp: &[(BigInt, u32)]) -> BigInt {
    pp.iter()
        .map(|(q, e)| q.pow(e - 1) * (q - 1u32))
        .fold(BigInt::one(), |acc, x| acc * x)
}

fn sigma_of(pp: &[(BigInt, u32)], s: u32) -> BigInt {
    pp.iter()
        .map(|(q, e)| {
            let qs = q.pow(s);
            let mut term = BigInt::one();
            let mut sum = BigInt::one();
            for _ in 0..*e {
                term *= &qs;
                sum += &term;
            }
            sum
        })
        .fold(BigInt::one(), |acc, x| acc * x)
}

/// `Σ_{j=0}^{terms-1} (−1)^j / (q−1)^j`
pub(crate) fn alternating_sum(q: &BigInt, terms: u32) -> BigRational {
    let ratio = BigRational::new(BigInt::from(-1), q - 1u32);
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for _ in 0..terms {
        sum += &term;
        term *= &ratio;
    }
    sum
}

pub(crate) fn rational_to_integer(x: BigRational, what: &str) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegerResult(format!("{what} = {x}")))
    }
}

fn phi_k_of(pp: &[(BigInt, u32)], k: u32) -> Result<BigInt> {
    let phi = BigRational::from_integer(phi_of(pp));
    let mut acc = phi.pow(k as i32);
    for (q, _) in pp {
        acc *= alternating_sum(q, k);
    }
    let v = rational_to_integer(acc, "phi_k")?;
    if v.is_negative() {
        return Err(Error::NonIntegerResult(format!("phi_k negative: {v}")));
    }
    Ok(v)
}

pub fn moebius(a: &Ideal) -> i64 {
    moebius_of(&prime_powers(a))
}

pub fn euler_phi(a: &Ideal) -> BigInt {
    phi_of(&prime_powers(a))
}

pub fn sigma_s(a: &Ideal, s: u32) -> BigInt {
    sigma_of(&prime_powers(a), s)
}

/// `φ_k(n)` from the alternating product formula.
pub fn phi_k_formula(n: &Ideal, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    phi_k_of(&prime_powers(n), k)
}

pub fn lattice_moebius(lat: &DivisorLattice, i: usize) -> i64 {
    moebius_of(&lattice_prime_powers(lat, i))
}

pub fn lattice_phi(lat: &DivisorLattice, i: usize) -> BigInt {
    phi_of(&lattice_prime_powers(lat, i))
}

pub fn lattice_sigma(lat: &DivisorLattice, i: usize, s: u32) -> BigInt {
    sigma_of(&lattice_prime_powers(lat, i), s)
}

pub fn lattice_phi_k(lat: &DivisorLattice, i: usize, k: u32) -> Result<BigInt> {
    phi_k_of(&lattice_prime_powers(lat, i), k)
}

/// `C_j[t]`: number of unit `j`-tuples summing to residue `t`.
pub fn unit_sum_distribution(ring: &ResidueRing, j: u32) -> Vec<u128> {
    let mut dist = vec![0u128; ring.size()];
    dist[ring.zero_index()] = 1;
    for _ in 0..j {
        let mut next = vec![0u128; ring.size()];
        for (x, &c) in dist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &a in ring.unit_indices() {
                next[ring.add(x, a)] += c;
            }
        }
        dist = next;
    }
    dist
}

/// Number of unit `k`-tuples modulo `n` whose sum is a unit modulo `m`.
pub fn phi_k_two_arg(ring: &ResidueRing, m: &Ideal, k: u32) -> Result<BigInt> {
    if !m.divides(ring.modulus())? {
        return Err(Error::NotADivisor);
    }
    let mi = ring.lattice().index_of(m).expect("divisor is enumerated");
    Ok(BigInt::from(phi_k_two_arg_index(ring, mi, k)))
}

pub(crate) fn phi_k_two_arg_index(ring: &ResidueRing, mi: usize, k: u32) -> u128 {
    let lat = ring.lattice();
    let good = |t: usize| lat.coprime(ring.gcd_class(t), mi);
    let units = ring.unit_indices();
    match k {
        0 => good(ring.zero_index()) as u128,
        1 => units.iter().filter(|&&a| good(a)).count() as u128,
        2 => {
            let mut count = 0u128;
            for &a in units {
                for &b in units {
                    if good(ring.add(a, b)) {
                        count += 1;
                    }
                }
            }
            count
        }
        _ => unit_sum_distribution(ring, k)
            .iter()
            .enumerate()
            .filter(|&(t, _)| good(t))
            .map(|(_, &c)| c)
            .sum(),
    }
}

/// `φ_k(n)` by counting.
pub fn phi_k_bruteforce(ring: &ResidueRing, k: u32) -> Result<BigInt> {
    phi_k_two_arg(ring, ring.modulus(), k)
}

/// `φ(n) Σ_{d|m} μ(d)/φ(d) · φ_{k−1}(n, d)`
pub fn phi_k_recursion_rhs(ring: &ResidueRing, m: &Ideal, k: u32) -> Result<BigInt> {
    if k < 2 {
        return Err(Error::InvalidParams("recursion needs k >= 2".into()));
    }
    if !m.divides(ring.modulus())? {
        return Err(Error::NotADivisor);
    }
    let lat = ring.lattice();
    let mi = lat.index_of(m).expect("divisor is enumerated");
    let mut acc = BigRational::zero();
    for d in lat.divisors_of(mi) {
        let mu = lattice_moebius(lat, d);
        if mu == 0 {
            continue;
        }
        let inner = BigInt::from(phi_k_two_arg_index(ring, d, k - 1));
        acc += BigRational::new(BigInt::from(mu) * inner, lattice_phi(lat, d));
    }
    acc *= BigRational::from_integer(BigInt::from(ring.phi()));
    rational_to_integer(acc, "phi_k recursion")
}

/// `n₀ = ∏_{p | d} p^{v_p(n)}`
pub fn n_zero_of(n: &Ideal, d: &Ideal) -> Result<Ideal> {
    if !d.divides(n)? {
        return Err(Error::NotADivisor);
    }
    let mut out = Ideal::unit(n.field());
    for (p, _) in d.factor() {
        out = out.mul(&p.ideal.pow(n.valuation(p)))?;
    }
    Ok(out)
}

/// Lattice index of `n₀` for divisor index `d`.
pub fn n_zero_index(lat: &DivisorLattice, d: usize) -> usize {
    let exps: Vec<u32> =
        lat.exps(d).iter().zip(lat.max_exps()).map(|(&e, &m)| if e > 0 { m } else { 0 }).collect();
    lat.index_of_exps(&exps)
}

/// Named choice of an arithmetical function.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncSpec {
    Norm,
    NormPow(u32),
    Sigma(u32),
    Moebius,
    One,
    Phi,
    /// Explicit values on divisors, with the name to report.
    Table(String, Vec<TableEntry>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub divisor: IdealLiteral,
    #[serde(with = "bigint_json")]
    pub value: BigInt,
}

mod bigint_json {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(x) => s.serialize_i64(x),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        crate::numfield::json_bigint(&v).map_err(serde::de::Error::custom)
    }
}

impl FuncSpec {
    /// Parses `norm`, `norm^s`, `sigma:s` (also `sigma1`), `moebius`, `one`,
    /// `phi`, or `table:<path>` pointing at a JSON divisor table.
    pub fn parse(text: &str) -> Result<FuncSpec> {
        let bad = || Error::Parse(format!("unknown function '{text}'"));
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
        Ok(match text {
            "norm" | "N" => FuncSpec::Norm,
            "moebius" | "mu" => FuncSpec::Moebius,
            "one" | "1" => FuncSpec::One,
            "phi" => FuncSpec::Phi,
            "sigma1" => FuncSpec::Sigma(1),
            _ => {
                if let Some(s) = text.strip_prefix("norm^") {
                    FuncSpec::NormPow(num(s)?)
                } else if let Some(s) = text.strip_prefix("sigma:") {
                    FuncSpec::Sigma(num(s)?)
                } else if let Some(path) = text.strip_prefix("table:") {
                    FuncSpec::load_table(Path::new(path))?
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn load_table(path: &Path) -> Result<FuncSpec> {
        let text = std::fs::read_to_string(path)?;
        let entries: Vec<TableEntry> = serde_json::from_str(&text)?;
        let name = path.file_stem().map_or("table".into(), |s| s.to_string_lossy().into_owned());
        Ok(FuncSpec::Table(name, entries))
    }

    pub fn name(&self) -> String {
        match self {
            FuncSpec::Norm => "norm".into(),
            FuncSpec::NormPow(s) => format!("norm^{s}"),
            FuncSpec::Sigma(s) => format!("sigma:{s}"),
            FuncSpec::Moebius => "moebius".into(),
            FuncSpec::One => "one".into(),
            FuncSpec::Phi => "phi".into(),
            FuncSpec::Table(name, _) => format!("table:{name}"),
        }
    }

    pub fn tabulate(&self, lat: &Arc<DivisorLattice>) -> Result<IdealFunc> {
        let n = lat.len();
        let values: Vec<BigInt> = match self {
            FuncSpec::Norm => (0..n).map(|i| lat.norm(i).clone()).collect(),
            FuncSpec::NormPow(s) => (0..n).map(|i| lat.norm(i).pow(*s)).collect(),
            FuncSpec::Sigma(s) => (0..n).map(|i| lattice_sigma(lat, i, *s)).collect(),
            FuncSpec::Moebius => (0..n).map(|i| BigInt::from(lattice_moebius(lat, i))).collect(),
            FuncSpec::One => vec![BigInt::one(); n],
            FuncSpec::Phi => (0..n).map(|i| lattice_phi(lat, i)).collect(),
            FuncSpec::Table(_, entries) => {
                let field = lat.modulus().field();
                let mut values: Vec<Option<BigInt>> = vec![None; n];
                for e in entries {
                    let ideal = e.divisor.build(field)?;
                    if let Some(i) = lat.index_of(&ideal) {
                        values[i] = Some(e.value.clone());
                    }
                }
                values
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.ok_or_else(|| {
                            Error::InvalidParams(format!(
                                "function table has no value at divisor {}",
                                lat.ideal(i)
                            ))
                        })
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(IdealFunc { name: self.name(), lattice: lat.clone(), values, is_norm: *self == FuncSpec::Norm })
    }
}

/// A function on the divisors of a fixed modulus.
#[derive(Debug, Clone)]
pub struct IdealFunc {
    name: String,
    lattice: Arc<DivisorLattice>,
    values: Vec<BigInt>,
    is_norm: bool,
}

impl IdealFunc {
    pub fn from_values(name: &str, lattice: &Arc<DivisorLattice>, values: Vec<BigInt>) -> Result<IdealFunc> {
        if values.len() != lattice.len() {
            return Err(Error::InvalidParams("table length differs from divisor count".into()));
        }
        let is_norm = values.iter().enumerate().all(|(i, v)| v == lattice.norm(i));
        Ok(IdealFunc { name: name.into(), lattice: lattice.clone(), values, is_norm })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lattice(&self) -> &Arc<DivisorLattice> {
        &self.lattice
    }

    /// Whether the function agrees with the absolute norm on every divisor.
    pub fn is_norm(&self) -> bool {
        self.is_norm
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize) -> &BigInt {
        &self.values[i]
    }

    pub fn eval(&self, a: &Ideal) -> Result<&BigInt> {
        self.lattice.index_of(a).map(|i| &self.values[i]).ok_or(Error::NotADivisor)
    }

    /// Replaces one value; used to inject deliberate mismatches.
    pub fn with_value(mut self, i: usize, v: BigInt) -> IdealFunc {
        self.values[i] = v;
        self.is_norm = self.values.iter().enumerate().all(|(i, v)| v == self.lattice.norm(i));
        self.name = format!("{}*", self.name);
        self
    }
}

/// `(f ∗ g)(a) = Σ_{d | a} f(d) g(a/d)` on every divisor of the modulus.
pub fn dirichlet_convolve(f: &IdealFunc, g: &IdealFunc) -> Result<IdealFunc> {
    if !Arc::ptr_eq(&f.lattice, &g.lattice) && f.lattice.modulus() != g.lattice.modulus() {
        return Err(Error::InvalidParams("functions live on different moduli".into()));
    }
    let lat = &f.lattice;
    let values = (0..lat.len())
        .map(|a| lat.divisors_of(a).map(|d| &f.values[d] * &g.values[lat.quotient(a, d)]).sum())
        .collect();
    IdealFunc::from_values(&format!("({})*({})", f.name, g.name), lat, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;

    fn gauss() -> Arc<NumberField> {
        Arc::new(NumberField::from_i64(&[1, 0, 1]).unwrap())
    }

    fn rationals() -> Arc<NumberField> {
        Arc::new(NumberField::from_i64(&[0, 1]).unwrap())
    }

    fn int(k: &Arc<NumberField>, m: i64) -> Ideal {
        Ideal::from_int(k, m).unwrap()
    }

    #[test]
    fn classical_functions() {
        let k = gauss();
        let one_plus_i = Ideal::principal(&k, &k.element_i64(&[1, 1]).unwrap()).unwrap();
        assert_eq!(moebius(&Ideal::unit(&k)), 1);
        assert_eq!(moebius(&int(&k, 2)), 0);
        assert_eq!(moebius(&int(&k, 6)), 0);
        assert_eq!(moebius(&int(&k, 3).mul(&one_plus_i).unwrap()), 1);
        assert_eq!(euler_phi(&Ideal::unit(&k)), BigInt::from(1));
        assert_eq!(euler_phi(&int(&k, 3)), BigInt::from(8));
        assert_eq!(euler_phi(&int(&k, 2)), BigInt::from(2));
        assert_eq!(sigma_s(&Ideal::unit(&k), 0), BigInt::from(1));
        assert_eq!(sigma_s(&int(&k, 2), 1), BigInt::from(7));
        assert_eq!(sigma_s(&int(&k, 3), 0), BigInt::from(2));
    }

    #[test]
    fn generalized_euler() {
        let k = gauss();
        let three = int(&k, 3);
        assert_eq!(phi_k_formula(&three, 1).unwrap(), BigInt::from(8));
        assert_eq!(phi_k_formula(&three, 2).unwrap(), BigInt::from(56));
        let p = Ideal::principal(&k, &k.element_i64(&[1, 1]).unwrap()).unwrap();
        assert_eq!(phi_k_formula(&p, 2).unwrap(), BigInt::from(0));

        let r3 = ResidueRing::new(&three).unwrap();
        assert_eq!(phi_k_two_arg(&r3, &Ideal::unit(&k), 2).unwrap(), BigInt::from(64));
        assert_eq!(phi_k_two_arg(&r3, &three, 2).unwrap(), BigInt::from(56));
        assert_eq!(phi_k_recursion_rhs(&r3, &three, 2).unwrap(), BigInt::from(56));
        assert_eq!(phi_k_recursion_rhs(&r3, &Ideal::unit(&k), 3).unwrap(), BigInt::from(512));
        let r2 = ResidueRing::new(&int(&k, 2)).unwrap();
        assert_eq!(phi_k_bruteforce(&r2, 2).unwrap(), BigInt::from(0));
        assert_eq!(phi_k_two_arg(&r2, &int(&k, 3), 2), Err(Error::NotADivisor));

        let q = rationals();
        let r4 = ResidueRing::new(&int(&q, 4)).unwrap();
        assert_eq!(phi_k_bruteforce(&r4, 2).unwrap(), BigInt::from(0));
        let r5 = ResidueRing::new(&int(&q, 5)).unwrap();
        // pairs of units mod 5 with unit sum: 16 − 4
        assert_eq!(phi_k_bruteforce(&r5, 2).unwrap(), BigInt::from(12));
        assert_eq!(phi_k_recursion_rhs(&r5, &int(&q, 5), 2).unwrap(), BigInt::from(12));
        for kk in 1..=4 {
            let brute = phi_k_bruteforce(&r5, kk).unwrap();
            assert_eq!(brute, phi_k_formula(&int(&q, 5), kk).unwrap());
        }
    }

    #[test]
    fn n_zero() {
        let k = gauss();
        let six = int(&k, 6);
        let p = Ideal::principal(&k, &k.element_i64(&[1, 1]).unwrap()).unwrap();
        assert_eq!(n_zero_of(&six, &Ideal::unit(&k)).unwrap(), Ideal::unit(&k));
        assert_eq!(n_zero_of(&six, &p).unwrap(), int(&k, 2));
        assert_eq!(n_zero_of(&six, &six).unwrap(), six);
        assert_eq!(n_zero_of(&int(&k, 3), &p), Err(Error::NotADivisor));
        let lat = DivisorLattice::new(&six);
        let pi = lat.index_of(&p).unwrap();
        assert_eq!(lat.ideal(n_zero_index(&lat, pi)), &int(&k, 2));
    }

    #[test]
    fn convolutions() {
        let k = gauss();
        let lat = Arc::new(DivisorLattice::new(&int(&k, 6)));
        let mu = FuncSpec::Moebius.tabulate(&lat).unwrap();
        let one = FuncSpec::One.tabulate(&lat).unwrap();
        let norm = FuncSpec::Norm.tabulate(&lat).unwrap();
        let phi = FuncSpec::Phi.tabulate(&lat).unwrap();
        let sigma0 = FuncSpec::Sigma(0).tabulate(&lat).unwrap();
        let unit = dirichlet_convolve(&mu, &one).unwrap();
        for i in 0..lat.len() {
            assert_eq!(unit.at(i), &BigInt::from((i == 0) as i64));
        }
        assert_eq!(dirichlet_convolve(&mu, &norm).unwrap().values(), phi.values());
        assert_eq!(dirichlet_convolve(&one, &one).unwrap().values(), sigma0.values());
        assert!(norm.is_norm());
        assert!(!phi.is_norm());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(FuncSpec::parse("norm").unwrap(), FuncSpec::Norm);
        assert_eq!(FuncSpec::parse("sigma1").unwrap(), FuncSpec::Sigma(1));
        assert_eq!(FuncSpec::parse("sigma:2").unwrap(), FuncSpec::Sigma(2));
        assert_eq!(FuncSpec::parse("norm^3").unwrap(), FuncSpec::NormPow(3));
        assert!(FuncSpec::parse("zeta").is_err());
    }

    #[test]
    fn explicit_table() {
        let q = rationals();
        let lat = Arc::new(DivisorLattice::new(&int(&q, 4)));
        let entries: Vec<TableEntry> = serde_json::from_str(
            r#"[{"divisor":{"int":1},"value":5},{"divisor":{"int":2},"value":-1},{"divisor":{"int":4},"value":"7"}]"#,
        )
        .unwrap();
        let f = FuncSpec::Table("t".into(), entries.clone()).tabulate(&lat).unwrap();
        assert_eq!(f.values(), &[BigInt::from(5), BigInt::from(-1), BigInt::from(7)]);
        let missing = FuncSpec::Table("t".into(), entries[..2].to_vec()).tabulate(&lat);
        assert!(missing.is_err());
    }
}
