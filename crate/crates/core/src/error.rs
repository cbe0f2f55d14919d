use thiserror::Error;

/// Errors produced by the orbit-dimension library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("the zero vector does not represent a state")]
    ZeroState,

    #[error("operation requires exact rational entries")]
    UnsupportedRepresentation,

    #[error("hypothesis not satisfied (residual {residual:e})")]
    HypothesisViolation { residual: f64 },

    #[error("triple-span intersection has dimension {dim}, need at least 2")]
    DegenerateIntersection { dim: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("sign matrix has trivial real kernel; no witness exists")]
    NoWitness,

    #[error("sign-matrix dichotomy contradicted: neither a GF(2) kernel nor a ones-preimage was found")]
    InternalContradiction,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
