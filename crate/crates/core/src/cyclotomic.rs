//! Exact cyclotomic integers `Σ c_j ζ_m^j`.
//!
//! Values are stored in the group ring `Z[x]/(x^m − 1)`; equality and zero
//! tests reduce modulo the cyclotomic polynomial `Φ_m`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact quotient of `num` by the monic `den`; panics on a nonzero remainder.
fn div_monic_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// `Φ_m`, constant term first: `x^m − 1` divided by `Φ_e` for every proper
/// divisor `e` of `m`. Cached per `m`.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1);
    if let Some(p) = phi_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for e in (1..m).filter(|e| m.is_multiple_of(*e)) {
        num = div_monic_exact(&num, &cyclotomic_poly(e));
    }
    let p = Arc::new(num);
    phi_cache().write().unwrap().entry(m).or_insert(p).clone()
}

#[derive(Clone, Debug)]
pub struct CycInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(m: u64) -> CycInt {
        assert!(m >= 1);
        CycInt { m, coeffs: vec![BigInt::zero(); m as usize] }
    }

    pub fn from_int(m: u64, c: impl Into<BigInt>) -> CycInt {
        let mut z = CycInt::zero(m);
        z.coeffs[0] = c.into();
        z
    }

    /// `ζ_m^j`
    pub fn root(m: u64, j: u64) -> CycInt {
        let mut z = CycInt::zero(m);
        z.coeffs[(j % m) as usize] = BigInt::one();
        z
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<BigInt>) -> CycInt {
        let mut z = CycInt::zero(m);
        for (j, c) in coeffs.into_iter().enumerate() {
            z.coeffs[j % m as usize] += c;
        }
        z
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Adds `c·ζ_m^j` in place.
    pub fn add_term(&mut self, j: u64, c: &BigInt) {
        self.coeffs[(j % self.m) as usize] += c;
    }

    /// Re-expresses the value over `ζ_{m2}` for a multiple `m2` of the order.
    pub fn lift(&self, m2: u64) -> CycInt {
        assert!(m2.is_multiple_of(self.m), "can only lift to a multiple of the order");
        let step = (m2 / self.m) as usize;
        let mut z = CycInt::zero(m2);
        for (j, c) in self.coeffs.iter().enumerate() {
            z.coeffs[j * step] = c.clone();
        }
        z
    }

    fn aligned(&self, other: &CycInt) -> (CycInt, CycInt) {
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let m = self.m.lcm(&other.m);
        (self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        let (a, b) = self.aligned(other);
        let m = a.m as usize;
        let mut z = CycInt::zero(a.m);
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    z.coeffs[(i + j) % m] += x * y;
                }
            }
        }
        z
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt { m: self.m, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Coefficients of the canonical representative modulo `Φ_m`, of length
    /// `deg Φ_m`.
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.m);
        let d = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for i in (d..r.len()).rev() {
            let c = std::mem::take(&mut r[i]);
            if c.is_zero() {
                continue;
            }
            for (j, p) in phi[..d].iter().enumerate() {
                r[i - d + j] -= &c * p;
            }
        }
        r.truncate(d);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// The rational integer this value equals, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        let r = self.reduced();
        if r[1..].iter().all(Zero::is_zero) {
            Some(r[0].clone())
        } else {
            None
        }
    }

    /// Reduced coefficients over `ζ_m`; rational values are written with
    /// `m = 1`.
    pub fn canonical(&self) -> CycJson {
        let to_json = |x: &BigInt| match x.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(x.to_string()),
        };
        if let Some(v) = self.to_integer() {
            return CycJson { m: 1, coeffs: vec![to_json(&v)] };
        }
        CycJson { m: self.m, coeffs: self.reduced().iter().map(to_json).collect() }
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &CycInt) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for CycInt {}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_integer() {
            return write!(f, "{v}");
        }
        let r = self.reduced();
        let mut first = true;
        for (j, c) in r.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{j}", self.m)?,
                (_, false) => write!(f, "{mag}*z{}^{j}", self.m)?,
            }
        }
        Ok(())
    }
}

/// JSON form of a cyclotomic integer: the order and the coefficients of the
/// reduced representative in the basis `1, ζ, …, ζ^{deg Φ_m − 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycJson {
    pub m: u64,
    pub coeffs: Vec<serde_json::Value>,
}
