//! Ground-truth exact linear algebra, independent of any lattice structure.
//!
//! Nothing in here knows about posets, Ψ, or closed forms; the engine's
//! results are checked against these routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

fn require_square(m: &RatMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Determinant by Bareiss fraction-free elimination.
///
/// Each row is first scaled by the lcm of its denominators so elimination
/// runs over integers; the scale factors are divided out at the end. Pivots
/// are the first nonzero entry at or below the diagonal.
pub fn oracle_det(m: &RatMatrix) -> Result<Rational> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

/// Inverse by Gauss-Jordan elimination over the rationals.
pub fn oracle_inverse(m: &RatMatrix) -> Result<RatMatrix> {
    let n = require_square(m)?;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(p, k);
        inv.swap(p, k);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].clone();
            for j in 0..n {
                let da = &factor * &a[k][j];
                a[i][j] -= da;
                let di = &factor * &inv[k][j];
                inv[i][j] -= di;
            }
        }
    }
    let out = RatMatrix::from_rows(inv)?;
    debug_assert!(matmul(m, &out).map(|p| p.is_identity()).unwrap_or(false));
    Ok(out)
}

pub fn matmul(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    a.mul(b)
}

/// Whether `a * b` is exactly the identity.
pub fn identity_check(a: &RatMatrix, b: &RatMatrix) -> Result<bool> {
    Ok(a.mul(b)?.is_identity())
}

/// Laplace expansion along the first row; exponential, for small
/// cross-checks only.
pub fn cofactor_det(m: &RatMatrix) -> Result<Rational> {
    let n = require_square(m)?;
    fn expand(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> Rational {
        if rows.is_empty() {
            return Rational::one();
        }
        let r = rows[0];
        let mut acc = Rational::zero();
        for (k, &c) in cols.iter().enumerate() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = v * expand(m, &rows[1..], &rest);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(expand(m, &idx, &idx))
}

/// Plain Gaussian elimination with rational division.
pub fn gaussian_det(m: &RatMatrix) -> Result<Rational> {
    let n = require_square(m)?;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in (k + 1)..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &factor * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    Ok(det)
}
