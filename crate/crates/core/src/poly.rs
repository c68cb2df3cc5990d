//! Dense polynomial helpers: exact determinants and resultants over Z, and
//! factorization of small polynomials over prime fields.
//!
//! Coefficient vectors are stored constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Resultant of two nonzero polynomials via the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut syl = vec![vec![BigInt::zero(); size]; size];
    // rows hold coefficients highest degree first
    for r in 0..n {
        for (i, c) in f.iter().rev().enumerate() {
            syl[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            syl[n + r][r + i] = c.clone();
        }
    }
    det_bareiss(syl)
}

/// Discriminant of a monic polynomial of degree >= 1.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let res = resultant(f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

fn trim_fp(f: &mut Vec<u64>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

/// Reduces integer coefficients into `[0, p)`.
pub fn reduce_mod_p(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = f
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits u64"))
        .collect();
    trim_fp(&mut out);
    out
}

/// Divides `f` by the monic `h` over F_p, returning the quotient when the
/// remainder vanishes.
pub fn div_exact_fp(f: &[u64], h: &[u64], p: u64) -> Option<Vec<u64>> {
    let df = f.len() - 1;
    let dh = h.len() - 1;
    if dh > df {
        return None;
    }
    let mut rem: Vec<u64> = f.to_vec();
    let mut quot = vec![0u64; df - dh + 1];
    for i in (0..=df - dh).rev() {
        let c = rem[i + dh] % p;
        quot[i] = c;
        if c != 0 {
            for (j, hj) in h.iter().enumerate() {
                let t = (c as u128 * *hj as u128 % p as u128) as u64;
                rem[i + j] = (rem[i + j] + p - t) % p;
            }
        }
    }
    if rem[..dh].iter().all(|&c| c == 0) {
        Some(quot)
    } else {
        None
    }
}

/// Monic irreducible factors of a monic polynomial over F_p with their
/// multiplicities, sorted by degree and then lexicographically on the
/// coefficient vector.
///
/// Candidate factors are tried exhaustively by degree, so the cost is
/// `p^(deg/2)`; this is meant for the small primes and degrees that arise
/// when splitting rational primes in low-degree fields.
pub fn factor_mod_p(f: &[BigInt], p: u64) -> Vec<(Vec<u64>, u32)> {
    let mut g = reduce_mod_p(f, p);
    assert_eq!(*g.last().unwrap(), 1, "factor_mod_p expects a monic polynomial");
    let mut out = Vec::new();
    let mut e = 1usize;
    while 2 * e < g.len() {
        // enumerate the monic polynomials of degree e in lexicographic order
        let mut lower = vec![0u64; e];
        loop {
            let mut h = lower.clone();
            h.push(1);
            let mut mult = 0u32;
            while let Some(q) = div_exact_fp(&g, &h, p) {
                g = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((h, mult));
            }
            if 2 * e > g.len() - 1 {
                break;
            }
            let mut i = 0;
            loop {
                if i == e {
                    break;
                }
                lower[i] += 1;
                if lower[i] < p {
                    break;
                }
                lower[i] = 0;
                i += 1;
            }
            if i == e {
                break;
            }
        }
        e += 1;
    }
    if g.len() > 1 {
        out.push((g, 1));
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Trial-division factorization of a positive integer.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive());
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}
