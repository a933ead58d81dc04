use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::det::{
    cauchy_binet_sum, require_single_join_closed, require_single_upper_closed, resolve_method,
    upper_closed_psi, DetMethod,
};
use super::minors::{incidence_minor, subset_count, unrank, Binomials, Incidence};
use super::{
    build_matrix, incidence_rows, meet_reciprocal, resolve_basis, EngineConfig, MatrixKind,
    MatrixSpec,
};
use crate::error::{Error, Result};
use crate::function::PosetFunction;
use crate::matrix::RatMatrix;
use crate::par::reduce_range;
use crate::poset::OrderedSubset;
use crate::psi::{psi_mobius, psi_recursive};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMethod {
    /// Cofactors expanded by Cauchy-Binet over `(n-1)`-subsets of the basis.
    CofactorCauchyBinet,
    /// `b_ij = Σ_{x_k ⪯ x_i, x_j} μ_S(x_k, x_i) μ_S(x_k, x_j) / Ψ_{S,f}(x_k)`.
    JoinClosed,
    /// The same sum with the host Möbius function, which agrees with `μ_S`
    /// on a set upper-closed up to its join.
    UpperClosed,
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseOutcome {
    pub matrix: RatMatrix,
    /// The method actually used; never `Auto`.
    pub method: InverseMethod,
}

fn cofactor_inverse(spec: &MatrixSpec, f: &PosetFunction, cfg: &EngineConfig) -> Result<RatMatrix> {
    let n = spec.x().len();
    let d = resolve_basis(spec)?;
    let psi = psi_recursive(&d, f)?;
    let psi = psi.values();
    let ex = incidence_rows(spec.x(), &d);
    let ey = incidence_rows(spec.y(), &d);
    let det = cauchy_binet_sum(&ex, &ey, psi, cfg)?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }

    let m = psi.len();
    let k = n - 1;
    let binom = Binomials::new(m);
    let count = subset_count(&binom, m, k, cfg.cap, cfg.force)?;
    // all_but[r] lists every row except r.
    let all_but: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).filter(|&i| i != r).collect())
        .collect();
    let minors = |e: &Incidence, cols: &[usize]| -> Vec<i128> {
        all_but
            .iter()
            .map(|rows| incidence_minor(e, rows, cols))
            .collect()
    };

    // acc[i][j] = det of M with row j and column i removed.
    let acc = reduce_range(
        cfg.execution,
        count,
        || vec![Rational::zero(); n * n],
        |rank| {
            let mut out = vec![Rational::zero(); n * n];
            let cols = unrank(&binom, rank, m, k);
            if cols.iter().any(|&c| psi[c].is_zero()) {
                return Ok(out);
            }
            let mx = minors(&ex, &cols);
            if mx.iter().all(|&v| v == 0) {
                return Ok(out);
            }
            let my = minors(&ey, &cols);
            let weight = cols.iter().fold(Rational::one(), |acc, &c| acc * &psi[c]);
            for i in 0..n {
                if my[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    if mx[j] != 0 {
                        out[i * n + j] =
                            &weight * Rational::from_integer(BigInt::from(mx[j] * my[i]));
                    }
                }
            }
            Ok(out)
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )?;

    Ok(RatMatrix::from_fn(n, n, |i, j| {
        let v = &acc[i * n + j] / &det;
        if (i + j) % 2 == 0 {
            v
        } else {
            -v
        }
    }))
}

/// `Σ_{x_k ⪯ x_i, x_j} μ(x_k, x_i) μ(x_k, x_j) / Ψ(x_k)` with `μ` supplied by
/// position in `S`.
fn mobius_quotient(
    s: &OrderedSubset,
    psi: &[Rational],
    mu: impl Fn(usize, usize) -> BigInt,
) -> Result<RatMatrix> {
    if let Some(k) = psi.iter().position(Zero::is_zero) {
        return Err(Error::ZeroPsi(s.id(k).to_string()));
    }
    let n = s.len();
    let poset = s.poset();
    let idx = s.indices();
    let inv_psi: Vec<Rational> = psi.iter().map(|v| v.recip()).collect();
    // mus[k][i] = μ(x_k, x_i), zero unless x_k ⪯ x_i.
    let mus: Vec<Vec<BigInt>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    if poset.leq(idx[k], idx[i]) {
                        mu(k, i)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(RatMatrix::from_fn(n, n, |i, j| {
        let mut acc = Rational::zero();
        for k in 0..n {
            let (a, b) = (&mus[k][i], &mus[k][j]);
            if !a.is_zero() && !b.is_zero() {
                acc += &inv_psi[k] * Rational::from_integer(a * b);
            }
        }
        acc
    }))
}

fn join_inverse(
    spec: &MatrixSpec,
    f: &PosetFunction,
    method: InverseMethod,
    cfg: &EngineConfig,
) -> Result<RatMatrix> {
    match method {
        InverseMethod::CofactorCauchyBinet => cofactor_inverse(spec, f, cfg),
        InverseMethod::JoinClosed => {
            require_single_join_closed(spec)?;
            let s = spec.x();
            let psi = psi_mobius(s, f)?;
            let local = s.induced_poset();
            mobius_quotient(s, psi.values(), |k, i| local.mobius(k, i).clone())
        }
        InverseMethod::UpperClosed => {
            require_single_upper_closed(spec)?;
            let s = spec.x();
            let psi = upper_closed_psi(s, f)?;
            let poset = s.poset();
            let idx = s.indices();
            mobius_quotient(s, &psi, |k, i| poset.mobius(idx[k], idx[i]).clone())
        }
        InverseMethod::Auto => unreachable!("resolved by the caller"),
    }
}

/// Inverse of a square meet or join matrix by a closed form.
///
/// Meet matrices use `(X, Y)_f^{-1} = Δ_Y^{-1} [X, Y]_{1/f}^{-1} Δ_X^{-1}`.
pub fn inverse_closed_form(
    spec: &MatrixSpec,
    method: InverseMethod,
    cfg: &EngineConfig,
) -> Result<InverseOutcome> {
    let n = spec.require_square()?;
    let method = match method {
        InverseMethod::Auto => match resolve_method(spec) {
            DetMethod::UpperClosed => InverseMethod::UpperClosed,
            DetMethod::JoinClosed => InverseMethod::JoinClosed,
            _ => InverseMethod::CofactorCauchyBinet,
        },
        m => m,
    };
    let matrix = match spec.kind() {
        MatrixKind::Join => join_inverse(spec, spec.f(), method, cfg)?,
        MatrixKind::Meet => {
            let needed = match method {
                InverseMethod::CofactorCauchyBinet => resolve_basis(spec)?,
                _ => spec.x().clone(),
            };
            let inverse = meet_reciprocal(spec, &needed)?;
            let b = join_inverse(spec, &inverse, method, cfg)?;
            let f = spec.f();
            let (xs, ys) = (spec.x().indices(), spec.y().indices());
            let mut out = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let scale = f.at(ys[i])? * f.at(xs[j])?;
                    out.set(i, j, b.get(i, j) / scale);
                }
            }
            out
        }
    };
    debug_assert!(build_matrix(spec)
        .and_then(|m| matrix.mul(&m))
        .map(|p| p.is_identity())
        .unwrap_or(true));
    Ok(InverseOutcome { matrix, method })
}
