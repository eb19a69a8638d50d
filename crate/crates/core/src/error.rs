use thiserror::Error;

use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("numeric failure: {message} (residual {residual:e})")]
    NumericFailure { message: String, residual: f64 },

    /// A path came within the branch tolerance of a branch position.
    #[error("path hits the ramification point of branch {branch} at {at}")]
    HitsRamification { branch: usize, at: Complex },

    #[error("no convergence threshold up to n_max; largest failing n = {largest_failing}")]
    ThresholdNotFound { largest_failing: u32 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedInput(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::NumericFailure {
            message: msg.into(),
            residual,
        }
    }
}
