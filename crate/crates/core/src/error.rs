use thiserror::Error;

/// Errors raised by the estimator, the occurrence index and the process models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A symbol index is not part of the alphabet.
    #[error("symbol index {index} is outside an alphabet of size {size}")]
    InvalidSymbol { index: usize, size: usize },

    /// The streaming index was asked to grow past the horizon it was sized for.
    #[error("capacity exceeded: index was built for n <= {horizon}, got n = {requested}")]
    Capacity { horizon: usize, requested: usize },

    /// A process specification failed validation. `field` names the offending part.
    #[error("invalid {field}: {reason}")]
    InvalidSpec { field: String, reason: String },

    /// A history has zero probability under the model, so no conditional exists.
    #[error("history has zero probability under the model at position {position}")]
    ImpossibleHistory { position: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn spec(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
