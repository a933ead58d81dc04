//! Exact meet and join matrices on finite posets.
//!
//! A [`FinitePoset`] is stored in a linear-extension order, and subsets
//! ([`OrderedSubset`]) keep that order. Matrices are built with
//! [`build_matrix`], factored through Ψ with [`factorize_join`] and
//! [`factorize_meet`], and inverted or reduced to determinants by closed forms
//! in [`engine`]. The [`oracle`] module computes the same quantities by plain
//! elimination so every closed form can be checked.
//!
//! ```
//! use latmat_core::{
//!     det_closed_form, DetMethod, DivisorPoset, EngineConfig, MatrixKind, MatrixSpec, PosetFunction,
//! };
//!
//! let host = DivisorPoset::divisors_of(6).unwrap();
//! let f = PosetFunction::integer_identity(host.poset());
//! let s = host.subset(&[1, 2, 3]).unwrap();
//! let spec = MatrixSpec::square(MatrixKind::Join, s, f).unwrap();
//! let det = det_closed_form(&spec, DetMethod::Auto, &EngineConfig::default()).unwrap();
//! assert_eq!(det.value.to_string(), "12");
//! ```

pub mod divisor;
pub mod engine;
pub mod error;
pub mod function;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod poset;
pub mod psi;
pub mod rational;

pub use divisor::{ArithmeticalFunction, DivisorPoset};
pub use engine::{
    build_matrix, default_basis, det_closed_form, factorize_join, factorize_meet, incidence_e,
    inverse_closed_form, resolve_basis, semimultiplicative_check, DetMethod, DetOutcome,
    EngineConfig, InverseMethod, InverseOutcome, JoinFactors, MatrixKind, MatrixSpec, MeetFactors,
    SemimultiplicativeCheck,
};
pub use error::{Error, Result};
pub use function::{parse_function, PosetFunction};
pub use matrix::RatMatrix;
pub use oracle::{oracle_det, oracle_inverse};
pub use par::Execution;
pub use poset::{
    build_poset, closure_predicates, join_closure, parse_poset, upper_part, ClosureFlags,
    ElementId, FinitePoset, OrderedSubset,
};
pub use psi::{
    psi_dirichlet, psi_join_closed, psi_mobius, psi_recursive, psi_upper_closed, MobiusSource,
    PsiMethod, PsiVector,
};
pub use rational::{format_rational, parse_rational, Rational};
