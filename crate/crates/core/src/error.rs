use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("enumeration of {required} candidates exceeds the cap of {cap}")]
    Infeasible { required: u128, cap: u128 },

    #[error("no support of the requested weight is consistent with the outcome")]
    NoConsistentSupport,

    #[error("column {column} has weight {weight} > {cap} after {attempts} sampling attempts")]
    RetryCapExceeded {
        column: usize,
        weight: usize,
        cap: usize,
        attempts: usize,
    },

    #[error("no t <= {cap} brings the bound down to {target}")]
    NoFeasibleTests { cap: usize, target: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
