use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "orbit {orbit} needs a right bound: anchored solutions have valuation growths {growths:?}"
    )]
    MissingRightBound { orbit: String, growths: Vec<i64> },

    #[error("iteration cap of {cap} exceeded at {point}")]
    IterationCap { point: String, cap: usize },

    #[error("bases do not span the same space")]
    SingularTransition,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
