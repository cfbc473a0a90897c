//! Small dense exact linear algebra over `BigInt` / `BigRational`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Sizes here are the vertex counts of
//! resolution graphs, so cubic algorithms are fine.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Leading principal minors `det(M_1), .., det(M_n)` by fraction-free
/// (Bareiss) elimination without pivoting.
///
/// Elimination stops at the first vanishing minor, which is the last entry
/// of the returned vector; a result shorter than `n` therefore always ends
/// in zero.
pub fn leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                // exact by Sylvester's identity
                a[i][j] = v / &prev;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Pivots `d_1, .., d_n` of the symmetric decomposition `M = L D L^T` with
/// unit lower-triangular `L`, or `None` when a pivot vanishes.
pub fn ldl_pivots(m: &[Vec<BigInt>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: RatMatrix = to_rational(m);
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let d = a[k][k].clone();
        if d.is_zero() {
            return None;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let l = &a[i][k] / &d;
            for j in k + 1..n {
                let delta = &l * &a[k][j];
                a[i][j] -= delta;
            }
        }
        pivots.push(d);
    }
    Some(pivots)
}

pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        inv.swap(k, p);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let da = &f * &a[k][j];
                a[i][j] -= da;
                let di = &f * &inv[k][j];
                inv[i][j] -= di;
            }
        }
    }
    Some(inv)
}

/// Integer adjugate of a nonsingular integer matrix: `det(M) * M^{-1}`.
pub fn adjugate(m: &[Vec<BigInt>]) -> Option<(IntMatrix, BigInt)> {
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let inv = inverse(m)?;
    let dr = BigRational::from(d.clone());
    let adj = inv
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let y = x * &dr;
                    debug_assert!(y.is_integer());
                    y.to_integer()
                })
                .collect()
        })
        .collect();
    Some((adj, d))
}

pub fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}
