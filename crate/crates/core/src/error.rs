use thiserror::Error;

/// Errors raised by the probability primitives, solvers and measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability vector is empty")]
    Empty,

    #[error("entry {index} is not finite ({value})")]
    NotFinite { index: usize, value: f64 },

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, expected 1 within 1e-9")]
    SumNotOne { sum: f64 },

    #[error("column {column}: {reason}")]
    InvalidColumn { column: usize, reason: String },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("p_y({index}) must be strictly positive")]
    NonPositivePrior { index: usize },

    #[error("symbol {index} of X has zero marginal probability")]
    ZeroMassSymbol { index: usize },

    #[error("y_values must be finite and pairwise distinct")]
    InvalidYValues,

    #[error("{count} retained linear forms exceed the cap of {cap}; region count grows exponentially with |X|")]
    TooManyForms { count: usize, cap: usize },

    #[error("|Y| = {size} exceeds the cap of {cap}; region enumeration grows exponentially")]
    AlphabetTooLarge { size: usize, cap: usize },

    #[error("no linearly independent basis yields a feasible point")]
    DegenerateSystem,

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit reached")]
    IterationLimit,

    #[error("mmse utility requires numeric y_values on the source")]
    MissingYValues,

    #[error("mechanism has empty support")]
    EmptySupport,

    #[error("operation requires binary Y, found |Y| = {size}")]
    NotBinary { size: usize },

    #[error("finite belief menu is empty")]
    EmptyMenu,

    #[error("trade-off range is degenerate: T(X;Y) = 0")]
    DegenerateRange,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
