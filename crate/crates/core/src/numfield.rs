//! Monogenic rings of integers `Z[θ]` presented by a monic integer polynomial.
//!
//! Every downstream computation assumes the presented order is the full ring
//! of integers. Only squarefreeness of the polynomial is checked here; the
//! shipped corpus restricts itself to fields where `Z[θ]` is known to be
//! maximal.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    degree: usize,
    min_poly: Vec<BigInt>,
    discriminant: BigInt,
}

/// An element of `Z[θ]` in the power basis `1, θ, …, θ^(deg-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgInt {
    pub coords: Vec<BigInt>,
}

impl AlgInt {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl NumberField {
    /// Builds a field from a monic integer polynomial, constant term first.
    pub fn new(min_poly: Vec<BigInt>) -> Result<Self> {
        Self::named("", min_poly)
    }

    pub fn named(name: &str, mut min_poly: Vec<BigInt>) -> Result<Self> {
        while min_poly.len() > 1 && min_poly.last().is_some_and(Zero::is_zero) {
            min_poly.pop();
        }
        if min_poly.len() < 2 {
            return Err(Error::DegreeZero);
        }
        if !min_poly.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let discriminant = poly::discriminant(&min_poly);
        // gcd(f, f') = 1 over Q exactly when the discriminant is nonzero
        if discriminant.is_zero() {
            return Err(Error::NotSquarefree);
        }
        Ok(NumberField {
            name: name.to_string(),
            degree: min_poly.len() - 1,
            min_poly,
            discriminant,
        })
    }

    pub fn from_i64(min_poly: &[i64]) -> Result<Self> {
        Self::new(min_poly.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn zero(&self) -> AlgInt {
        AlgInt { coords: vec![BigInt::zero(); self.degree] }
    }

    pub fn one(&self) -> AlgInt {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> AlgInt {
        self.from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(&self, c: BigInt) -> AlgInt {
        let mut a = self.zero();
        a.coords[0] = c;
        a
    }

    /// The generator `θ` (equal to the integer root `-c₀` when the degree is 1).
    pub fn theta(&self) -> AlgInt {
        let mut x = vec![BigInt::zero(), BigInt::one()];
        self.reduce_poly(&mut x);
        AlgInt { coords: x }
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<AlgInt> {
        if coords.len() != self.degree {
            return Err(Error::FieldMismatch);
        }
        Ok(AlgInt { coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<AlgInt> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn check(&self, a: &AlgInt) -> Result<()> {
        if a.coords.len() == self.degree {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgInt {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgInt {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn neg(&self, a: &AlgInt) -> AlgInt {
        AlgInt { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &AlgInt, c: &BigInt) -> AlgInt {
        AlgInt { coords: a.coords.iter().map(|x| x * c).collect() }
    }

    /// Reduces a polynomial in `θ` modulo the minimal polynomial, in place.
    fn reduce_poly(&self, p: &mut Vec<BigInt>) {
        let n = self.degree;
        while p.len() > n {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = p.len() - n;
            for (j, fj) in self.min_poly[..n].iter().enumerate() {
                p[shift + j] -= &c * fj;
            }
        }
        p.resize(n, BigInt::zero());
    }

    pub fn mul(&self, a: &AlgInt, b: &AlgInt) -> Result<AlgInt> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &AlgInt, b: &AlgInt) -> AlgInt {
        let n = self.degree;
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce_poly(&mut prod);
        AlgInt { coords: prod }
    }

    pub fn pow(&self, a: &AlgInt, mut e: u64) -> AlgInt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        acc
    }

    /// Columns are the coordinates of `a·θ^j`.
    pub fn mul_matrix(&self, a: &AlgInt) -> Vec<Vec<BigInt>> {
        let theta = self.theta();
        let mut col = a.clone();
        let mut cols = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            cols.push(col.coords.clone());
            col = self.mul_unchecked(&col, &theta);
        }
        cols
    }

    /// Absolute norm `|N(a)|`, the index of `⟨a⟩` for nonzero `a`.
    pub fn norm(&self, a: &AlgInt) -> BigInt {
        poly::det_bareiss(self.mul_matrix(a)).abs()
    }
}

/// One entry of a field corpus file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldEntry {
    pub name: String,
    pub min_poly: Vec<serde_json::Value>,
    #[serde(default)]
    pub notes: String,
}

pub(crate) fn json_bigint(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("integer expected, got {n}"))),
        serde_json::Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}"))),
        other => Err(Error::Parse(format!("integer expected, got {other}"))),
    }
}

impl FieldEntry {
    pub fn build(&self) -> Result<Arc<NumberField>> {
        let coeffs = self.min_poly.iter().map(json_bigint).collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(NumberField::named(&self.name, coeffs)?))
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<Arc<NumberField>>> {
    let entries: Vec<FieldEntry> = serde_json::from_str(text)?;
    entries.iter().map(FieldEntry::build).collect()
}

pub fn load_corpus(path: &Path) -> Result<Vec<Arc<NumberField>>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberField {
        NumberField::from_i64(&[1, 0, 1]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(NumberField::from_i64(&[1, -2, 1]), Err(Error::NotSquarefree));
        assert_eq!(NumberField::from_i64(&[1, 0, 2]), Err(Error::NotMonic));
        assert_eq!(NumberField::from_i64(&[3]), Err(Error::DegreeZero));
        assert_eq!(NumberField::from_i64(&[]), Err(Error::DegreeZero));
    }

    #[test]
    fn rationals_as_degree_one() {
        let q = NumberField::from_i64(&[0, 1]).unwrap();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.theta(), q.from_int(0));
        let a = q.from_int(-6);
        let b = q.from_int(7);
        assert_eq!(q.mul(&a, &b).unwrap(), q.from_int(-42));
        assert_eq!(q.norm(&a), BigInt::from(6));
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = gauss();
        assert_eq!(k.discriminant(), &BigInt::from(-4));
        let a = k.element_i64(&[1, 1]).unwrap();
        let b = k.element_i64(&[1, -1]).unwrap();
        assert_eq!(k.mul(&a, &b).unwrap(), k.from_int(2));
        let i = k.theta();
        assert_eq!(k.mul(&i, &i).unwrap(), k.from_int(-1));
        assert_eq!(k.add(&a, &k.zero()).unwrap(), a);
        assert_eq!(k.norm(&a), BigInt::from(2));
        assert_eq!(k.norm(&k.one()), BigInt::from(1));
        assert_eq!(k.norm(&k.from_int(3)), BigInt::from(9));
        assert_eq!(k.norm(&k.zero()), BigInt::from(0));
    }

    #[test]
    fn field_mismatch() {
        let k = gauss();
        let cubic = NumberField::from_i64(&[-1, -1, 0, 1]).unwrap();
        assert_eq!(k.add(&k.one(), &cubic.one()), Err(Error::FieldMismatch));
        assert_eq!(k.mul(&cubic.theta(), &k.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn cubic_relation() {
        let k = NumberField::from_i64(&[-1, -1, 0, 1]).unwrap();
        let t = k.theta();
        let t3 = k.pow(&t, 3);
        // θ³ = θ + 1
        assert_eq!(t3, k.element_i64(&[1, 1, 0]).unwrap());
        assert_eq!(k.norm(&t), BigInt::from(1));
        assert_eq!(k.discriminant(), &BigInt::from(-23));
    }

    #[test]
    fn corpus_parsing() {
        let text = r#"[{"name":"Q","min_poly":[0,1],"notes":"rationals"},
                       {"name":"Q(i)","min_poly":[1,0,"1"]}]"#;
        let fields = parse_corpus(text).unwrap();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[1].name(), "Q(i)");
        assert_eq!(fields[1].degree(), 2);
        assert!(parse_corpus(r#"[{"name":"bad","min_poly":[1,-2,1]}]"#).is_err());
    }

    #[test]
    fn display() {
        let k = gauss();
        assert_eq!(k.element_i64(&[1, -1]).unwrap().to_string(), "1 - t");
        assert_eq!(k.zero().to_string(), "0");
        assert_eq!(k.element_i64(&[0, 3]).unwrap().to_string(), "3*t");
    }
}
