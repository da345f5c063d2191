//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The label does not name an admitted affine algebra.
    #[error("unknown algebra: {0}")]
    UnknownAlgebra(String),
    /// A node or coordinate index is outside its range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// The requested combination is not shipped or not defined.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A crystal data file is missing, corrupt or violates an invariant.
    #[error("crystal data error: {0}")]
    Data(String),
    /// Invalid arguments to an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A truncated series was asked for terms beyond its known order.
    #[error("truncation underflow: {0}")]
    Truncation(String),
    /// A numeric iteration failed to converge.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

/// Result alias.
pub type Result<T> = std::result::Result<T, Error>;
