//! Column-style Hermite normal form for full-rank integer lattices.
//!
//! A basis is a list of columns; column `j` is supported on rows `0..=j`,
//! has a positive diagonal entry, and every entry above a diagonal is
//! reduced into `[0, diagonal)` of its row. Two lattices are equal exactly
//! when their HNF bases are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Column = Vec<BigInt>;

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn unit_multiple(n: usize, r: usize, d: &BigInt) -> Column {
    let mut c = vec![BigInt::zero(); n];
    c[r] = d.clone();
    c
}

/// HNF of the lattice spanned by `gens` in `Z^n`, or `None` when the span is
/// not of full rank.
///
/// When `modulus` is a positive integer `D` with `D·Z^n` inside the lattice,
/// intermediate entries are kept reduced modulo `D`.
pub fn hnf(n: usize, gens: Vec<Column>, modulus: Option<&BigInt>) -> Option<Vec<Column>> {
    let mut work: Vec<Column> = gens.into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    if let Some(d) = modulus {
        for r in 0..n {
            work.push(unit_multiple(n, r, d));
        }
    }
    let mut pivots: Vec<Column> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let mut pivot = loop {
            let idx = work
                .iter()
                .enumerate()
                .filter(|(_, w)| !w[i].is_zero())
                .min_by(|(_, a), (_, b)| a[i].abs().cmp(&b[i].abs()))
                .map(|(k, _)| k)?;
            let p = work.swap_remove(idx);
            let mut done = true;
            for w in work.iter_mut() {
                if !w[i].is_zero() {
                    let q = w[i].div_floor(&p[i]);
                    axpy(w, &q, &p);
                    if !w[i].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break p;
            }
            work.push(p);
        };
        if pivot[i].is_negative() {
            for x in pivot.iter_mut() {
                *x = -&*x;
            }
        }
        pivots[i] = pivot;
        if let Some(d) = modulus {
            for w in work.iter_mut() {
                for x in w.iter_mut().take(i) {
                    *x = x.mod_floor(d);
                }
            }
            work.retain(|w| w.iter().any(|x| !x.is_zero()));
            for r in 0..i {
                work.push(unit_multiple(n, r, d));
            }
        } else {
            work.retain(|w| w.iter().any(|x| !x.is_zero()));
        }
    }
    // reduce entries above each diagonal, bottom row first
    for j in 0..n {
        for i in (0..j).rev() {
            let q = pivots[j][i].div_floor(&pivots[i][i]);
            if !q.is_zero() {
                let (head, tail) = pivots.split_at_mut(j);
                axpy(&mut tail[0], &q, &head[i]);
            }
        }
    }
    for (j, col) in pivots.iter_mut().enumerate() {
        col.truncate(n);
        debug_assert!(col[j].is_positive());
    }
    Some(pivots)
}

/// Determinant (lattice index) of an HNF basis.
pub fn det(h: &[Column]) -> BigInt {
    h.iter().enumerate().fold(BigInt::one(), |acc, (j, c)| acc * &c[j])
}

pub fn contains(h: &[Column], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for j in (0..h.len()).rev() {
        if v[j].is_zero() {
            continue;
        }
        let (q, r) = v[j].div_rem(&h[j][j]);
        if !r.is_zero() {
            return false;
        }
        axpy(&mut v, &q, &h[j]);
    }
    true
}

/// Canonical representative of `v` modulo the lattice: every coordinate ends
/// up in `[0, diagonal)`.
pub fn reduce(h: &[Column], v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for j in (0..h.len()).rev() {
        let q = v[j].div_floor(&h[j][j]);
        if !q.is_zero() {
            axpy(&mut v, &q, &h[j]);
        }
    }
    v
}

/// HNF of the intersection of two full-rank lattices.
pub fn intersect(a: &[Column], b: &[Column]) -> Vec<Column> {
    let n = a.len();
    let mut cols = Vec::with_capacity(2 * n);
    for c in a {
        let mut v = c.clone();
        v.extend(c.iter().cloned());
        cols.push(v);
    }
    for c in b {
        let mut v = vec![BigInt::zero(); n];
        v.extend(c.iter().cloned());
        cols.push(v);
    }
    let full = hnf(2 * n, cols, None).expect("stacked lattice has full rank");
    let top: Vec<Column> = full.into_iter().take(n).map(|mut c| {
        c.truncate(n);
        c
    }).collect();
    hnf(n, top, None).expect("intersection has full rank")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(v: &[&[i64]]) -> Vec<Column> {
        v.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn simple_hnf() {
        // lattice spanned by (2, 0), (1, 1) in Z^2 -> columns (2,0), (1,1)
        let h = hnf(2, cols(&[&[1, 1], &[2, 0]]), None).unwrap();
        assert_eq!(h, cols(&[&[2, 0], &[1, 1]]));
        assert_eq!(det(&h), BigInt::from(2));
        // same lattice, different generators
        let h2 = hnf(2, cols(&[&[3, 1], &[5, 1], &[4, 0]]), None).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn rank_deficient() {
        assert!(hnf(2, cols(&[&[1, 1], &[2, 2]]), None).is_none());
        assert!(hnf(2, vec![], None).is_none());
    }

    #[test]
    fn modular_agrees_with_plain() {
        let gens = cols(&[&[6, 4, 2], &[0, 6, 3], &[0, 0, 6], &[3, 3, 3]]);
        let plain = hnf(3, gens.clone(), None).unwrap();
        let d = det(&plain);
        let modular = hnf(3, gens, Some(&d)).unwrap();
        assert_eq!(plain, modular);
    }

    #[test]
    fn membership_and_reduction() {
        let h = hnf(2, cols(&[&[3, 0], &[1, 3]]), None).unwrap();
        assert!(contains(&h, &[BigInt::from(4), BigInt::from(3)]));
        assert!(!contains(&h, &[BigInt::from(1), BigInt::from(0)]));
        let v = vec![BigInt::from(-5), BigInt::from(7)];
        let r = reduce(&h, &v);
        assert!(r.iter().zip(&h).enumerate().all(|(j, (x, c))| !x.is_negative() && x < &c[j]));
        let diff: Vec<BigInt> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        assert!(contains(&h, &diff));
    }

    #[test]
    fn intersection_of_scaled_lattices() {
        let a = hnf(2, cols(&[&[2, 0], &[0, 2]]), None).unwrap();
        let b = hnf(2, cols(&[&[3, 0], &[0, 3]]), None).unwrap();
        assert_eq!(intersect(&a, &b), cols(&[&[6, 0], &[0, 6]]));
    }
}
