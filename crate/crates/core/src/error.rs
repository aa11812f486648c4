use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters sit on (or within tolerance of) the critical discriminant Δ = 0.
    #[error("critical parameters: {0}")]
    Critical(String),
    /// An iteration or bracket search failed.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
