//! Meet and join matrices on two sets, their factorizations, and closed-form
//! determinants and inverses.
//!
//! The central identity is `[X, Y]_f = E(X) Λ_{D,f} E(Y)^T`, where `D` is any
//! basis containing every `x_i ∨ y_j`, `E` records which basis elements lie
//! above each row element, and `Λ` carries the Ψ values of `D`. Meet matrices
//! of semimultiplicative `f` reduce to join matrices of `1/f` through
//! `(X, Y)_f = Δ_X [X, Y]_{1/f} Δ_Y`.

pub mod arith;
mod det;
mod inverse;
pub(crate) mod minors;

use std::sync::Arc;

use num_traits::{One, Zero};

pub use det::{det_closed_form, DetMethod, DetOutcome};
pub use inverse::{inverse_closed_form, InverseMethod, InverseOutcome};

use crate::error::{Error, Result};
use crate::function::PosetFunction;
use crate::matrix::RatMatrix;
use crate::par::Execution;
use crate::poset::{join_closure, ElementId, OrderedSubset};
use crate::psi::{psi_recursive, PsiVector};
use crate::rational::Rational;
use minors::Incidence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Join,
    Meet,
}

/// The data defining `[X, Y]_f` or `(X, Y)_f`, plus an optional basis `D`.
#[derive(Debug, Clone)]
pub struct MatrixSpec {
    kind: MatrixKind,
    x: OrderedSubset,
    y: OrderedSubset,
    f: PosetFunction,
    basis: Option<OrderedSubset>,
}

impl MatrixSpec {
    pub fn new(
        kind: MatrixKind,
        x: OrderedSubset,
        y: OrderedSubset,
        f: PosetFunction,
    ) -> Result<Self> {
        if !x.same_poset(&y) {
            return Err(Error::ForeignPoset);
        }
        if !(Arc::ptr_eq(x.poset(), f.poset()) || **x.poset() == **f.poset()) {
            return Err(Error::ForeignPoset);
        }
        if x.is_empty() || y.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(MatrixSpec {
            kind,
            x,
            y,
            f,
            basis: None,
        })
    }

    pub fn join(x: OrderedSubset, y: OrderedSubset, f: PosetFunction) -> Result<Self> {
        Self::new(MatrixKind::Join, x, y, f)
    }

    pub fn meet(x: OrderedSubset, y: OrderedSubset, f: PosetFunction) -> Result<Self> {
        Self::new(MatrixKind::Meet, x, y, f)
    }

    /// `[S]_f` or `(S)_f`.
    pub fn square(kind: MatrixKind, s: OrderedSubset, f: PosetFunction) -> Result<Self> {
        Self::new(kind, s.clone(), s, f)
    }

    /// Pins the basis `D` instead of the default join-closure.
    pub fn with_basis(mut self, d: OrderedSubset) -> Result<Self> {
        if !d.same_poset(&self.x) {
            return Err(Error::ForeignPoset);
        }
        self.basis = Some(d);
        Ok(self)
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn x(&self) -> &OrderedSubset {
        &self.x
    }

    pub fn y(&self) -> &OrderedSubset {
        &self.y
    }

    pub fn f(&self) -> &PosetFunction {
        &self.f
    }

    pub fn basis(&self) -> Option<&OrderedSubset> {
        self.basis.as_ref()
    }

    /// `X = Y` as sequences.
    pub fn is_single_set(&self) -> bool {
        self.x == self.y
    }

    fn require_square(&self) -> Result<usize> {
        if self.x.len() == self.y.len() {
            Ok(self.x.len())
        } else {
            Err(Error::Dimension(format!(
                "|X| = {} but |Y| = {}",
                self.x.len(),
                self.y.len()
            )))
        }
    }
}

/// Knobs for the combinatorial closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest number of Cauchy-Binet terms enumerated without `force`.
    pub cap: u64,
    pub force: bool,
    pub execution: Execution,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            cap: 1_000_000,
            force: false,
            execution: Execution::default(),
        }
    }
}

/// Entry `(i, j)` is `f(x_i ∨ y_j)` for join kind and `f(x_i ∧ y_j)` for
/// meet kind. Rectangular shapes are allowed.
pub fn build_matrix(spec: &MatrixSpec) -> Result<RatMatrix> {
    let poset = spec.x.poset();
    RatMatrix::try_from_fn(spec.x.len(), spec.y.len(), |i, j| {
        let (a, b) = (spec.x.indices()[i], spec.y.indices()[j]);
        let z = match spec.kind {
            MatrixKind::Join => poset.join(a, b)?,
            MatrixKind::Meet => poset.meet(a, b)?,
        };
        spec.f.at(z).cloned()
    })
}

fn incidence_rows(x: &OrderedSubset, d: &OrderedSubset) -> Incidence {
    let poset = x.poset();
    x.indices()
        .iter()
        .map(|&xi| d.indices().iter().map(|&dj| poset.leq(xi, dj)).collect())
        .collect()
}

/// `E(X)`: `e_ij = 1` iff `x_i ⪯ d_j`.
pub fn incidence_e(x: &OrderedSubset, d: &OrderedSubset) -> Result<RatMatrix> {
    if !x.same_poset(d) {
        return Err(Error::ForeignPoset);
    }
    let rows = incidence_rows(x, d);
    Ok(RatMatrix::from_fn(x.len(), d.len(), |i, j| {
        if rows[i][j] {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// Join-closure of all pairwise joins `x_i ∨ y_j`, in carrier order.
pub fn default_basis(x: &OrderedSubset, y: &OrderedSubset) -> Result<OrderedSubset> {
    if !x.same_poset(y) {
        return Err(Error::ForeignPoset);
    }
    let poset = x.poset();
    let mut joins = Vec::new();
    for &a in x.indices() {
        for &b in y.indices() {
            let j = poset.join(a, b)?;
            if !joins.contains(&j) {
                joins.push(j);
            }
        }
    }
    joins.sort_unstable();
    join_closure(&OrderedSubset::from_sorted(poset, joins))
}

/// The supplied basis after checking it holds every `x_i ∨ y_j`, or the
/// default one.
pub fn resolve_basis(spec: &MatrixSpec) -> Result<OrderedSubset> {
    match &spec.basis {
        None => default_basis(&spec.x, &spec.y),
        Some(d) => {
            let poset = spec.x.poset();
            for &a in spec.x.indices() {
                for &b in spec.y.indices() {
                    let j = poset.join(a, b)?;
                    if !d.contains(j) {
                        return Err(Error::Hypothesis(format!(
                            "basis lacks the join `{}` of `{}` and `{}`",
                            poset.id(j),
                            poset.id(a),
                            poset.id(b)
                        )));
                    }
                }
            }
            Ok(d.clone())
        }
    }
}

/// `E(X)`, `Λ_{D,f}` and `E(Y)` with `[X, Y]_f = E(X) Λ E(Y)^T`.
#[derive(Debug, Clone)]
pub struct JoinFactors {
    pub e_x: RatMatrix,
    pub lambda: RatMatrix,
    pub e_y: RatMatrix,
    pub psi: PsiVector,
}

impl JoinFactors {
    pub fn product(&self) -> Result<RatMatrix> {
        self.e_x.mul(&self.lambda)?.mul(&self.e_y.transpose())
    }
}

pub fn factorize_join(spec: &MatrixSpec) -> Result<JoinFactors> {
    if spec.kind != MatrixKind::Join {
        return Err(Error::Hypothesis(
            "join factorization needs a join matrix".into(),
        ));
    }
    let d = resolve_basis(spec)?;
    let psi = psi_recursive(&d, &spec.f)?;
    Ok(JoinFactors {
        e_x: incidence_e(&spec.x, &d)?,
        lambda: RatMatrix::diagonal(psi.values()),
        e_y: incidence_e(&spec.y, &d)?,
        psi,
    })
}

/// `Δ_X`, `E(X)`, `Λ_{D,1/f}`, `E(Y)` and `Δ_Y` with
/// `(X, Y)_f = Δ_X E(X) Λ_{D,1/f} E(Y)^T Δ_Y`.
#[derive(Debug, Clone)]
pub struct MeetFactors {
    pub delta_x: RatMatrix,
    pub e_x: RatMatrix,
    pub lambda: RatMatrix,
    pub e_y: RatMatrix,
    pub delta_y: RatMatrix,
    pub psi: PsiVector,
}

impl MeetFactors {
    pub fn product(&self) -> Result<RatMatrix> {
        self.delta_x
            .mul(&self.e_x)?
            .mul(&self.lambda)?
            .mul(&self.e_y.transpose())?
            .mul(&self.delta_y)
    }
}

/// Checks `f(x)f(y) = f(x ∧ y) f(x ∨ y)` on every pair of `X × Y` and that `f`
/// is nonzero on `X`, `Y` and `d`; returns `1/f`.
fn meet_reciprocal(spec: &MatrixSpec, d: &OrderedSubset) -> Result<PosetFunction> {
    let poset = spec.x.poset();
    let f = &spec.f;
    let mut required: Vec<usize> = spec.x.indices().to_vec();
    required.extend_from_slice(spec.y.indices());
    required.extend_from_slice(d.indices());
    let inverse = f.reciprocal(&required)?;
    for &a in spec.x.indices() {
        for &b in spec.y.indices() {
            let lhs = f.at(a)? * f.at(b)?;
            let rhs = f.at(poset.meet(a, b)?)? * f.at(poset.join(a, b)?)?;
            if lhs != rhs {
                return Err(Error::Semimultiplicativity(
                    poset.id(a).to_string(),
                    poset.id(b).to_string(),
                ));
            }
        }
    }
    Ok(inverse)
}

fn delta(s: &OrderedSubset, f: &PosetFunction) -> Result<RatMatrix> {
    let values = s
        .indices()
        .iter()
        .map(|&i| f.at(i).cloned())
        .collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::diagonal(&values))
}

pub fn factorize_meet(spec: &MatrixSpec) -> Result<MeetFactors> {
    if spec.kind != MatrixKind::Meet {
        return Err(Error::Hypothesis(
            "meet factorization needs a meet matrix".into(),
        ));
    }
    let d = resolve_basis(spec)?;
    let inverse = meet_reciprocal(spec, &d)?;
    let psi = psi_recursive(&d, &inverse)?;
    Ok(MeetFactors {
        delta_x: delta(&spec.x, &spec.f)?,
        e_x: incidence_e(&spec.x, &d)?,
        lambda: RatMatrix::diagonal(psi.values()),
        e_y: incidence_e(&spec.y, &d)?,
        delta_y: delta(&spec.y, &spec.f)?,
        psi,
    })
}

/// Outcome of a semimultiplicativity test over a whole carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemimultiplicativeCheck {
    pub holds: bool,
    pub witness: Option<(ElementId, ElementId)>,
}

/// Tests `f(x)f(y) = f(x ∧ y) f(x ∨ y)` on every pair of the carrier.
pub fn semimultiplicative_check(f: &PosetFunction) -> Result<SemimultiplicativeCheck> {
    let poset = f.poset();
    for a in 0..poset.len() {
        for b in (a + 1)..poset.len() {
            let lhs = f.at(a)? * f.at(b)?;
            let rhs = f.at(poset.meet(a, b)?)? * f.at(poset.join(a, b)?)?;
            if lhs != rhs {
                return Ok(SemimultiplicativeCheck {
                    holds: false,
                    witness: Some((poset.id(a).clone(), poset.id(b).clone())),
                });
            }
        }
    }
    Ok(SemimultiplicativeCheck {
        holds: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::DivisorPoset;
    use crate::poset::{build_poset, FinitePoset};
    use crate::rational::rat;

    pub(crate) fn int_chain(xs: &[i64]) -> Arc<FinitePoset> {
        let ids: Vec<ElementId> = xs.iter().map(|&x| ElementId::from(x)).collect();
        let rels = ids
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect::<Vec<_>>();
        Arc::new(build_poset(ids, rels).unwrap())
    }

    #[test]
    fn max_and_lcm_matrices() {
        let p = int_chain(&[1, 2, 3]);
        let s = OrderedSubset::whole(&p);
        let f = PosetFunction::integer_identity(&p);
        let spec = MatrixSpec::square(MatrixKind::Join, s, f).unwrap();
        assert_eq!(
            build_matrix(&spec).unwrap(),
            RatMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 2, 3], &[3, 3, 3]])
        );

        let host = DivisorPoset::divisors_of(6).unwrap();
        let s = host.subset(&[1, 2, 3]).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let spec = MatrixSpec::square(MatrixKind::Join, s.clone(), f.clone()).unwrap();
        assert_eq!(
            build_matrix(&spec).unwrap(),
            RatMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 2, 6], &[3, 6, 3]])
        );
        let spec = MatrixSpec::square(MatrixKind::Meet, s, f).unwrap();
        assert_eq!(
            build_matrix(&spec).unwrap(),
            RatMatrix::from_i64_rows(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 3]])
        );
    }

    #[test]
    fn one_by_one() {
        let p = int_chain(&[5]);
        let s = OrderedSubset::whole(&p);
        let f = PosetFunction::constant(&p, rat(-4));
        let spec = MatrixSpec::square(MatrixKind::Join, s, f).unwrap();
        assert_eq!(
            build_matrix(&spec).unwrap(),
            RatMatrix::from_i64_rows(&[&[-4]])
        );
        let factors = factorize_join(&spec).unwrap();
        assert_eq!(factors.e_x, RatMatrix::from_i64_rows(&[&[1]]));
        assert_eq!(
            factors.product().unwrap(),
            RatMatrix::from_i64_rows(&[&[-4]])
        );
    }

    #[test]
    fn incidence_of_divisors() {
        let host = DivisorPoset::divisors_of(6).unwrap();
        let x = host.subset(&[1, 2, 3]).unwrap();
        let d = host.subset(&[1, 2, 3, 6]).unwrap();
        assert_eq!(
            incidence_e(&x, &d).unwrap(),
            RatMatrix::from_i64_rows(&[&[1, 1, 1, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]])
        );
        let e = incidence_e(&d, &d).unwrap();
        assert_eq!(crate::oracle::oracle_det(&e).unwrap(), rat(1));
        for i in 0..4 {
            assert_eq!(e.get(i, i), &rat(1));
            for j in 0..i {
                assert_eq!(e.get(i, j), &rat(0));
            }
        }
    }

    #[test]
    fn chain_factorization() {
        let p = int_chain(&[1, 2, 3]);
        let s = OrderedSubset::whole(&p);
        let f = PosetFunction::integer_identity(&p);
        let spec = MatrixSpec::square(MatrixKind::Join, s, f).unwrap();
        let factors = factorize_join(&spec).unwrap();
        assert_eq!(
            factors.lambda,
            RatMatrix::diagonal(&[rat(-1), rat(-1), rat(3)])
        );
        assert_eq!(factors.product().unwrap(), build_matrix(&spec).unwrap());
    }

    #[test]
    fn single_join_factorization() {
        let host = DivisorPoset::divisors_of(6).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let spec =
            MatrixSpec::join(host.subset(&[2]).unwrap(), host.subset(&[3]).unwrap(), f).unwrap();
        let factors = factorize_join(&spec).unwrap();
        assert_eq!(
            factors.product().unwrap(),
            RatMatrix::from_i64_rows(&[&[6]])
        );
    }

    #[test]
    fn gcd_matrix_meet_factorization() {
        let host = DivisorPoset::divisors_of(6).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let s = host.subset(&[1, 2, 3]).unwrap();
        let spec = MatrixSpec::square(MatrixKind::Meet, s, f).unwrap();
        let factors = factorize_meet(&spec).unwrap();
        assert_eq!(
            factors.product().unwrap(),
            RatMatrix::from_i64_rows(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 3]])
        );
    }

    #[test]
    fn non_semimultiplicative_rejected() {
        let host = DivisorPoset::divisors_of(6).unwrap();
        let f = host.function(|n| rat(n as i64 + 1));
        let s = host.subset(&[2, 3]).unwrap();
        let spec = MatrixSpec::square(MatrixKind::Meet, s, f.clone()).unwrap();
        assert!(matches!(
            factorize_meet(&spec),
            Err(Error::Semimultiplicativity(a, b)) if a == "2" && b == "3"
        ));
        let check = semimultiplicative_check(&f).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some(("2".into(), "3".into())));
    }

    #[test]
    fn semimultiplicative_examples() {
        let host = DivisorPoset::divisors_of(60).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        assert!(semimultiplicative_check(&f).unwrap().holds);
        let chain = int_chain(&[3, 8, 11, 20]);
        let g = PosetFunction::from_fn(&chain, |id| rat(id.as_str().len() as i64 * 7 - 3));
        assert!(semimultiplicative_check(&g).unwrap().holds);
    }

    #[test]
    fn zero_value_rejected_for_meets() {
        let p = int_chain(&[-1, 0, 1]);
        let f = PosetFunction::integer_identity(&p);
        let spec = MatrixSpec::square(MatrixKind::Meet, OrderedSubset::whole(&p), f).unwrap();
        assert!(matches!(factorize_meet(&spec), Err(Error::ZeroValue(z)) if z == "0"));
    }

    #[test]
    fn supplied_basis_must_hold_joins() {
        let host = DivisorPoset::divisors_of(12).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let s = host.subset(&[2, 3]).unwrap();
        let spec = MatrixSpec::square(MatrixKind::Join, s, f)
            .unwrap()
            .with_basis(host.subset(&[2, 3]).unwrap())
            .unwrap();
        assert!(matches!(factorize_join(&spec), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn default_basis_is_join_closure_of_joins() {
        let host = DivisorPoset::divisors_of(60).unwrap();
        let x = host.subset(&[4, 6]).unwrap();
        let y = host.subset(&[10]).unwrap();
        let d = default_basis(&x, &y).unwrap();
        let labels: Vec<String> = d.ids().iter().map(|e| e.to_string()).collect();
        assert_eq!(labels, ["20", "30", "60"]);
    }
}
