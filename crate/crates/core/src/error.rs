use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample value at index {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("need at least {required} observations, got {got}")]
    TooFewObservations { required: usize, got: usize },

    #[error("(2k-1)!! for k = {k} does not fit in 128 bits")]
    Capacity { k: u32 },

    #[error("quadrature did not converge: estimated relative error {achieved:e} > {requested:e}")]
    Integration { achieved: f64, requested: f64 },

    #[error("could not bracket the root: {0}")]
    Bracketing(String),

    #[error("expectation is not monotone in the scale parameter near c = {c}")]
    NonMonotone { c: f64 },

    #[error("unsupported distribution for {operation}: {dist}")]
    UnsupportedDistribution { operation: &'static str, dist: String },

    #[error("every grid point overflowed")]
    AllSaturated,

    #[error("{0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
