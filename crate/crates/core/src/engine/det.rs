use num_traits::{One, Zero};

use super::minors::{incidence_minor, subset_count, unrank, Binomials, Incidence};
use super::{incidence_rows, meet_reciprocal, resolve_basis, EngineConfig, MatrixKind, MatrixSpec};
use crate::error::{Error, Result};
use crate::function::PosetFunction;
use crate::par::reduce_range;
use crate::poset::{closure_predicates, OrderedSubset};
use crate::psi::{psi_mobius, psi_recursive};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetMethod {
    /// Sum over maximal minors of the incidence factors; any `X`, `Y`.
    CauchyBinet,
    /// `Π Ψ_{S,f}(x_v)` with `μ_S`, for a join-closed `S = X = Y`.
    JoinClosed,
    /// `Π Σ_{x_v ⪯ x_u} f(x_u) μ(x_v, x_u)` with the host Möbius function,
    /// for `S = X = Y` upper-closed up to `∨S`.
    UpperClosed,
    /// The cheapest valid method: upper-closed, then join-closed, then
    /// Cauchy-Binet.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetOutcome {
    pub value: Rational,
    /// The method actually used; never `Auto`.
    pub method: DetMethod,
}

/// Picks the cheapest method whose hypothesis holds.
pub(super) fn resolve_method(spec: &MatrixSpec) -> DetMethod {
    if spec.is_single_set() {
        let flags = closure_predicates(spec.x());
        if flags.is_upper_closed_up_to_join {
            return DetMethod::UpperClosed;
        }
        if flags.is_join_closed {
            return DetMethod::JoinClosed;
        }
    }
    DetMethod::CauchyBinet
}

pub(super) fn require_single_join_closed(spec: &MatrixSpec) -> Result<()> {
    if !spec.is_single_set() {
        return Err(Error::Hypothesis("the join-closed form needs X = Y".into()));
    }
    if !closure_predicates(spec.x()).is_join_closed {
        return Err(Error::Hypothesis("S is not join-closed".into()));
    }
    Ok(())
}

pub(super) fn require_single_upper_closed(spec: &MatrixSpec) -> Result<()> {
    if !spec.is_single_set() {
        return Err(Error::Hypothesis(
            "the upper-closed form needs X = Y".into(),
        ));
    }
    if !closure_predicates(spec.x()).is_upper_closed_up_to_join {
        return Err(Error::Hypothesis(
            "S is not upper-closed up to its join".into(),
        ));
    }
    Ok(())
}

/// `Σ_{k_1 < ... < k_n} det E(X)_(k) det E(Y)_(k) Π Ψ(d_{k_i})`, zero when
/// `n > m`.
pub(super) fn cauchy_binet_sum(
    ex: &Incidence,
    ey: &Incidence,
    psi: &[Rational],
    cfg: &EngineConfig,
) -> Result<Rational> {
    let n = ex.len();
    let m = psi.len();
    if n > m {
        return Ok(Rational::zero());
    }
    let binom = Binomials::new(m);
    let count = subset_count(&binom, m, n, cfg.cap, cfg.force)?;
    let rows: Vec<usize> = (0..n).collect();
    reduce_range(
        cfg.execution,
        count,
        Rational::zero,
        |rank| {
            let cols = unrank(&binom, rank, m, n);
            if cols.iter().any(|&c| psi[c].is_zero()) {
                return Ok(Rational::zero());
            }
            let dx = incidence_minor(ex, &rows, &cols);
            if dx == 0 {
                return Ok(Rational::zero());
            }
            let dy = incidence_minor(ey, &rows, &cols);
            if dy == 0 {
                return Ok(Rational::zero());
            }
            let mut term = Rational::from_integer((dx * dy).into());
            for &c in &cols {
                term *= &psi[c];
            }
            Ok(term)
        },
        |a, b| a + b,
    )
}

/// `Π_v Σ_{x_v ⪯ x_u} f(x_u) μ_P(x_v, x_u)` over the host poset `P`.
pub(super) fn upper_closed_psi(s: &OrderedSubset, f: &PosetFunction) -> Result<Vec<Rational>> {
    let poset = s.poset();
    let members = s.indices();
    members
        .iter()
        .map(|&xv| {
            let mut acc = Rational::zero();
            for &xu in members {
                let mu = poset.mobius(xv, xu);
                if !mu.is_zero() {
                    acc += f.at(xu)? * Rational::from_integer(mu.clone());
                }
            }
            Ok(acc)
        })
        .collect()
}

fn join_det(
    spec: &MatrixSpec,
    f: &PosetFunction,
    method: DetMethod,
    cfg: &EngineConfig,
) -> Result<Rational> {
    match method {
        DetMethod::CauchyBinet => {
            let d = resolve_basis(spec)?;
            let psi = psi_recursive(&d, f)?;
            let ex = incidence_rows(spec.x(), &d);
            let ey = incidence_rows(spec.y(), &d);
            cauchy_binet_sum(&ex, &ey, psi.values(), cfg)
        }
        DetMethod::JoinClosed => {
            require_single_join_closed(spec)?;
            let psi = psi_mobius(spec.x(), f)?;
            Ok(psi.values().iter().fold(Rational::one(), |acc, v| acc * v))
        }
        DetMethod::UpperClosed => {
            require_single_upper_closed(spec)?;
            let psi = upper_closed_psi(spec.x(), f)?;
            Ok(psi.iter().fold(Rational::one(), |acc, v| acc * v))
        }
        DetMethod::Auto => unreachable!("resolved by the caller"),
    }
}

/// Determinant of a square meet or join matrix by a closed form.
///
/// Meet matrices go through `det (X, Y)_f = Π f(x_v) f(y_v) · det [X, Y]_{1/f}`,
/// which needs `f` semimultiplicative on `X × Y` and nonzero on `X`, `Y` and
/// the basis.
pub fn det_closed_form(
    spec: &MatrixSpec,
    method: DetMethod,
    cfg: &EngineConfig,
) -> Result<DetOutcome> {
    let n = spec.require_square()?;
    let method = match method {
        DetMethod::Auto => resolve_method(spec),
        m => m,
    };
    let value = match spec.kind() {
        MatrixKind::Join => join_det(spec, spec.f(), method, cfg)?,
        MatrixKind::Meet => {
            // Only the basis the chosen method reads needs 1/f.
            let needed = match method {
                DetMethod::CauchyBinet => resolve_basis(spec)?,
                _ => spec.x().clone(),
            };
            let inverse = meet_reciprocal(spec, &needed)?;
            let mut scale = Rational::one();
            for v in 0..n {
                scale *= spec.f().at(spec.x().indices()[v])?;
                scale *= spec.f().at(spec.y().indices()[v])?;
            }
            scale * join_det(spec, &inverse, method, cfg)?
        }
    };
    Ok(DetOutcome { value, method })
}
