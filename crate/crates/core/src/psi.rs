//! The Ψ function of a basis `D`: the unique values with
//! `f(d_k) = Σ_{d_k ⪯ d_v} Ψ(d_v)`.
//!
//! Five evaluation routes are provided. They must agree whenever their
//! hypotheses hold, and the test suites check that they do:
//!
//! * [`psi_recursive`]: top-down recursion over the linear extension;
//! * [`psi_mobius`]: Möbius inversion on `(D, ⪯)`;
//! * [`psi_join_closed`]: the double sum through `P_D` for join-closed `D`;
//! * [`psi_upper_closed`]: Möbius inversion with `μ_{P_D}` for `D`
//!   upper-closed up to `∨D`;
//! * [`psi_dirichlet`]: `[ζ ∗ (f_{d_k} μ)](lcm D / d_k)` on multiple-closed
//!   divisor sets.

use num_traits::Zero;

use crate::divisor::{dirichlet_psi, is_multiple_closed, lcm_u64, ArithmeticalFunction};
use crate::error::{Error, Result};
use crate::function::PosetFunction;
use crate::par::{map_range, Execution};
use crate::poset::{closure_predicates, upper_part, OrderedSubset};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiMethod {
    Recursive,
    Mobius,
    JoinClosed,
    UpperClosed,
    Dirichlet,
}

/// Which Möbius function the join-closed and upper-closed forms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MobiusSource {
    /// `μ_{P_D}` of the upper part, materialized inside the host poset.
    #[default]
    UpperPart,
    /// `μ_{⟨D⟩}`; only meaningful when `D` is join-closed, where `⟨D⟩ = D`.
    GeneratedSemilattice,
}

/// Ψ values for each basis element, tagged with the route that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiVector {
    basis: OrderedSubset,
    values: Vec<Rational>,
    method: PsiMethod,
}

impl PsiVector {
    pub fn basis(&self) -> &OrderedSubset {
        &self.basis
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &Rational {
        &self.values[k]
    }

    pub fn method(&self) -> PsiMethod {
        self.method
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    /// Checks `f(d_k) = Σ_{d_k ⪯ d_v} Ψ(d_v)` for every `k`.
    pub fn reconstructs(&self, f: &PosetFunction) -> Result<bool> {
        let poset = self.basis.poset();
        let members = self.basis.indices();
        for &dk in members {
            let mut sum = Rational::zero();
            for (v, &dv) in members.iter().enumerate() {
                if poset.leq(dk, dv) {
                    sum += &self.values[v];
                }
            }
            if &sum != f.at(dk)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index of the first vanishing value, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.values.iter().position(Zero::is_zero)
    }
}

fn check_same_poset(d: &OrderedSubset, f: &PosetFunction) -> Result<()> {
    if std::sync::Arc::ptr_eq(d.poset(), f.poset()) || **d.poset() == **f.poset() {
        Ok(())
    } else {
        Err(Error::ForeignPoset)
    }
}

fn nonempty(d: &OrderedSubset) -> Result<()> {
    if d.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// `Ψ(d_k) = f(d_k) − Σ_{d_k ≺ d_v} Ψ(d_v)`, evaluated from the last basis
/// element backwards so every successor is already known.
pub fn psi_recursive(d: &OrderedSubset, f: &PosetFunction) -> Result<PsiVector> {
    check_same_poset(d, f)?;
    let poset = d.poset();
    let members = d.indices();
    let m = members.len();
    let mut values = vec![Rational::zero(); m];
    for k in (0..m).rev() {
        let mut val = f.at(members[k])?.clone();
        for v in (k + 1)..m {
            if poset.leq(members[k], members[v]) {
                val -= &values[v];
            }
        }
        values[k] = val;
    }
    Ok(PsiVector {
        basis: d.clone(),
        values,
        method: PsiMethod::Recursive,
    })
}

/// `Ψ(d_k) = Σ_{d_k ⪯ d_v} f(d_v) μ_D(d_k, d_v)`.
pub fn psi_mobius(d: &OrderedSubset, f: &PosetFunction) -> Result<PsiVector> {
    psi_mobius_with(d, f, Execution::default())
}

pub fn psi_mobius_with(d: &OrderedSubset, f: &PosetFunction, exec: Execution) -> Result<PsiVector> {
    check_same_poset(d, f)?;
    let sub = d.induced_poset();
    let members = d.indices();
    let fv = members
        .iter()
        .map(|&i| f.at(i).cloned())
        .collect::<Result<Vec<_>>>()?;
    let values = map_range(exec, members.len(), |k| {
        let mut acc = Rational::zero();
        for v in k..members.len() {
            let mu = sub.mobius(k, v);
            if !mu.is_zero() {
                acc += &fv[v] * Rational::from_integer(mu.clone());
            }
        }
        Ok(acc)
    })?;
    Ok(PsiVector {
        basis: d.clone(),
        values,
        method: PsiMethod::Mobius,
    })
}

/// The join-closed form: for each `d_k`, sum over the `z ⪰ d_k` that lie
/// above no later basis element, of `Σ_{z ⪯ w ⪯ ∨D} f(w) μ_{P_D}(z, w)`.
pub fn psi_join_closed(d: &OrderedSubset, f: &PosetFunction) -> Result<PsiVector> {
    psi_join_closed_with(d, f, MobiusSource::UpperPart)
}

pub fn psi_join_closed_with(
    d: &OrderedSubset,
    f: &PosetFunction,
    source: MobiusSource,
) -> Result<PsiVector> {
    check_same_poset(d, f)?;
    nonempty(d)?;
    if !closure_predicates(d).is_join_closed {
        return Err(Error::Hypothesis("basis is not join-closed".into()));
    }
    let poset = d.poset();
    let host = match source {
        MobiusSource::UpperPart => upper_part(d)?,
        MobiusSource::GeneratedSemilattice => d.canonical(),
    };
    let top = d.supremum()?;
    let region = host.indices();
    let sub = host.induced_poset();
    let top_pos = host
        .position(top)
        .expect("the supremum of a join-closed set is a member");

    // inner[z] = Σ_{z ⪯ w ⪯ ∨D} f(w) μ(z, w), for every z of the region.
    let mut inner = Vec::with_capacity(region.len());
    for zp in 0..region.len() {
        let mut acc = Rational::zero();
        for wp in zp..region.len() {
            if !sub.leq(wp, top_pos) {
                continue;
            }
            let mu = sub.mobius(zp, wp);
            if !mu.is_zero() {
                acc += f.at(region[wp])? * Rational::from_integer(mu.clone());
            }
        }
        inner.push(acc);
    }

    let members = d.indices();
    let mut values = Vec::with_capacity(members.len());
    for (k, &dk) in members.iter().enumerate() {
        let mut acc = Rational::zero();
        for (zp, &z) in region.iter().enumerate() {
            if !poset.leq(dk, z) {
                continue;
            }
            if members[k + 1..].iter().any(|&dt| poset.leq(dt, z)) {
                continue;
            }
            acc += &inner[zp];
        }
        values.push(acc);
    }
    Ok(PsiVector {
        basis: d.clone(),
        values,
        method: PsiMethod::JoinClosed,
    })
}

/// `Ψ(d_k) = Σ_{d_k ⪯ d_v} f(d_v) μ_{P_D}(d_k, d_v)` for `D` upper-closed up
/// to `∨D`.
pub fn psi_upper_closed(d: &OrderedSubset, f: &PosetFunction) -> Result<PsiVector> {
    psi_upper_closed_with(d, f, MobiusSource::UpperPart)
}

pub fn psi_upper_closed_with(
    d: &OrderedSubset,
    f: &PosetFunction,
    source: MobiusSource,
) -> Result<PsiVector> {
    check_same_poset(d, f)?;
    nonempty(d)?;
    let flags = closure_predicates(d);
    if !flags.is_upper_closed_up_to_join {
        return Err(Error::Hypothesis(
            "basis is not upper-closed up to its join".into(),
        ));
    }
    let host = match source {
        MobiusSource::UpperPart => upper_part(d)?,
        MobiusSource::GeneratedSemilattice => {
            if !flags.is_join_closed {
                return Err(Error::Hypothesis(
                    "the generated semilattice form needs a join-closed basis".into(),
                ));
            }
            d.canonical()
        }
    };
    let sub = host.induced_poset();
    let members = d.indices();
    let pos: Vec<usize> = members
        .iter()
        .map(|&i| host.position(i).expect("D lies inside P_D"))
        .collect();
    let mut values = Vec::with_capacity(members.len());
    for k in 0..members.len() {
        let mut acc = Rational::zero();
        for v in 0..members.len() {
            let mu = sub.mobius(pos[k], pos[v]);
            if !mu.is_zero() {
                acc += f.at(members[v])? * Rational::from_integer(mu.clone());
            }
        }
        values.push(acc);
    }
    Ok(PsiVector {
        basis: d.clone(),
        values,
        method: PsiMethod::UpperClosed,
    })
}

/// Integer labels of a basis ordered by divisibility.
pub(crate) fn divisor_labels(d: &OrderedSubset) -> Result<Vec<u64>> {
    let labels = d
        .ids()
        .iter()
        .map(|id| {
            id.as_str()
                .parse::<u64>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Hypothesis(format!("`{id}` is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    let poset = d.poset();
    for (a, &ia) in d.indices().iter().enumerate() {
        for (b, &ib) in d.indices().iter().enumerate() {
            if poset.leq(ia, ib) != (labels[b] % labels[a] == 0) {
                return Err(Error::Hypothesis(
                    "host order is not divisibility on the basis".into(),
                ));
            }
        }
    }
    Ok(labels)
}

/// `Ψ(d_k) = [ζ ∗ (f_{d_k} μ)](lcm D / d_k)` for a basis of positive
/// integers that is multiple-closed up to `lcm D`.
pub fn psi_dirichlet(d: &OrderedSubset, f: &PosetFunction) -> Result<PsiVector> {
    check_same_poset(d, f)?;
    nonempty(d)?;
    let labels = divisor_labels(d)?;
    if !is_multiple_closed(&labels)? {
        return Err(Error::Hypothesis(
            "basis is not multiple-closed up to its lcm".into(),
        ));
    }
    let lcm = lcm_u64(&labels)?;
    let points: Vec<(usize, u64)> = d
        .indices()
        .iter()
        .copied()
        .zip(labels.iter().copied())
        .collect();
    let arith = ArithmeticalFunction::from_poset_function(f, &points)?;
    let values = labels
        .iter()
        .map(|&dk| dirichlet_psi(&arith, dk, lcm / dk))
        .collect::<Result<Vec<_>>>()?;
    Ok(PsiVector {
        basis: d.clone(),
        values,
        method: PsiMethod::Dirichlet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::DivisorPoset;
    use crate::poset::{build_poset, ElementId, FinitePoset};
    use crate::rational::rat;
    use std::sync::Arc;

    fn int_chain(xs: &[i64]) -> Arc<FinitePoset> {
        let ids: Vec<ElementId> = xs.iter().map(|&x| ElementId::from(x)).collect();
        let rels = ids
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect::<Vec<_>>();
        Arc::new(build_poset(ids, rels).unwrap())
    }

    fn rats(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn chain_recursion_by_hand() {
        let p = int_chain(&[1, 2, 3]);
        let d = OrderedSubset::whole(&p);
        let f = PosetFunction::integer_identity(&p);
        let expected = rats(&[-1, -1, 3]);
        assert_eq!(psi_recursive(&d, &f).unwrap().values(), expected.as_slice());
        assert_eq!(psi_mobius(&d, &f).unwrap().values(), expected.as_slice());
        assert_eq!(
            psi_join_closed(&d, &f).unwrap().values(),
            expected.as_slice()
        );
        assert_eq!(
            psi_upper_closed(&d, &f).unwrap().values(),
            expected.as_slice()
        );
    }

    #[test]
    fn singleton_basis_is_f() {
        let p = int_chain(&[4, 9]);
        let d = OrderedSubset::new(&p, [9]).unwrap();
        let f = PosetFunction::integer_identity(&p);
        for psi in [
            psi_recursive(&d, &f),
            psi_mobius(&d, &f),
            psi_join_closed(&d, &f),
            psi_upper_closed(&d, &f),
        ] {
            assert_eq!(psi.unwrap().values(), &[rat(9)]);
        }
    }

    #[test]
    fn divisors_of_six_by_hand() {
        let host = DivisorPoset::divisors_of(6).unwrap();
        let d = OrderedSubset::whole(host.poset());
        let f = PosetFunction::integer_identity(host.poset());
        let expected = rats(&[2, -4, -3, 6]);
        for psi in [
            psi_recursive(&d, &f).unwrap(),
            psi_mobius(&d, &f).unwrap(),
            psi_join_closed(&d, &f).unwrap(),
            psi_upper_closed(&d, &f).unwrap(),
            psi_dirichlet(&d, &f).unwrap(),
        ] {
            assert_eq!(psi.values(), expected.as_slice(), "{:?}", psi.method());
            assert!(psi.reconstructs(&f).unwrap());
        }
    }

    #[test]
    fn join_closed_inside_larger_host() {
        // D = {2, 3, 6} in the divisors of 12: P_D = D, but the host has more.
        let host = DivisorPoset::divisors_of(12).unwrap();
        let d = host.subset(&[2, 3, 6]).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let reference = psi_mobius(&d, &f).unwrap();
        assert_eq!(reference.values(), rats(&[-4, -3, 6]).as_slice());
        assert_eq!(
            psi_join_closed(&d, &f).unwrap().values(),
            reference.values()
        );
        assert_eq!(
            psi_upper_closed(&d, &f).unwrap().values(),
            reference.values()
        );
        assert_eq!(
            psi_join_closed_with(&d, &f, MobiusSource::GeneratedSemilattice)
                .unwrap()
                .values(),
            reference.values()
        );
    }

    #[test]
    fn join_closed_where_upper_part_is_bigger() {
        // D = {1, 4, 6, 12}: join-closed, P_D = all divisors of 12.
        let host = DivisorPoset::divisors_of(12).unwrap();
        let d = host.subset(&[1, 4, 6, 12]).unwrap();
        let f = host.function(|n| rat((n * n + 1) as i64));
        let reference = psi_recursive(&d, &f).unwrap();
        assert_eq!(psi_mobius(&d, &f).unwrap().values(), reference.values());
        assert_eq!(
            psi_join_closed(&d, &f).unwrap().values(),
            reference.values()
        );
        assert!(matches!(
            psi_upper_closed(&d, &f),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn hypotheses_enforced() {
        let host = DivisorPoset::divisors_of(12).unwrap();
        let f = PosetFunction::integer_identity(host.poset());
        let not_join_closed = host.subset(&[2, 3]).unwrap();
        assert!(matches!(
            psi_join_closed(&not_join_closed, &f),
            Err(Error::Hypothesis(_))
        ));
        let lcm_closed = host.subset(&[1, 6]).unwrap();
        assert!(matches!(
            psi_dirichlet(&lcm_closed, &f),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            psi_upper_closed(&lcm_closed, &f),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn missing_values_reported() {
        let p = Arc::new(build_poset(["a", "b"], [("a".into(), "b".into())]).unwrap());
        let f = PosetFunction::integer_identity(&p);
        let d = OrderedSubset::whole(&p);
        assert!(matches!(psi_recursive(&d, &f), Err(Error::MissingValue(_))));
        assert!(matches!(psi_mobius(&d, &f), Err(Error::MissingValue(_))));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let host = DivisorPoset::divisors_of(360).unwrap();
        let d = OrderedSubset::whole(host.poset());
        let f = host.function(|n| Rational::new((n as i64 % 7 - 3).into(), 5.into()));
        let a = psi_mobius_with(&d, &f, Execution::Sequential).unwrap();
        let b = psi_mobius_with(&d, &f, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values(), psi_recursive(&d, &f).unwrap().values());
    }
}
