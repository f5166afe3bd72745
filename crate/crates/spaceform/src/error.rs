//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the documented domain (NaN, negative length,
    /// radius past the space-form diameter, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A quantity left its mathematical domain by more than the rounding
    /// tolerance, e.g. a law-of-cosines inversion produced `m(c)` outside
    /// `[0, 2/k]`.
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    /// Side lengths do not satisfy the triangle inequality within tolerance.
    #[error("invalid triangle: {0}")]
    InvalidTriangle(String),

    /// A point does not satisfy its ambient model constraint.
    #[error("invalid model point: {0}")]
    InvalidPoint(String),

    /// A tangent vector is not unit or not tangent within tolerance.
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    /// A finite metric space is too small or malformed for the operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A quotient specification does not define a free action.
    #[error("invalid action: {0}")]
    InvalidAction(String),

    /// The neighborhood graph of a sampled instance is disconnected.
    #[error("disconnected graph: {0}")]
    Disconnected(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A distance-matrix file does not conform to the `FMS v1` format.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn numerical_domain(msg: impl Into<String>) -> Self {
        Error::NumericalDomain(msg.into())
    }
}
