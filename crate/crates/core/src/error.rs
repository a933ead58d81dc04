use thiserror::Error;

/// Everything that can go wrong while building posets, matrices, or
/// evaluating the closed forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("element `{0}` declared more than once")]
    DuplicateElement(String),

    #[error("members `{earlier}` and `{later}` are not ordered by a linear extension")]
    OrderViolation { earlier: String, later: String },

    #[error("empty set")]
    EmptySet,

    #[error("no {kind} for {elements}")]
    NoBound {
        kind: &'static str,
        elements: String,
    },

    #[error("function has no value at `{0}`")]
    MissingValue(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("function is not semimultiplicative: witness pair (`{0}`, `{1}`)")]
    Semimultiplicativity(String, String),

    #[error("function vanishes at `{0}`")]
    ZeroValue(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("Psi vanishes at `{0}`; the matrix is singular")]
    ZeroPsi(String),

    #[error("Cauchy-Binet enumeration needs C({m},{k}) = {count} terms, above the cap of {cap}")]
    CombinatorialBlowup {
        m: usize,
        k: usize,
        count: String,
        cap: u64,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subsets live in different posets")]
    ForeignPoset,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid literal `{0}`")]
    InvalidLiteral(String),

    #[error("integer {0} is too large for this operation")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
