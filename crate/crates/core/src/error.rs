use thiserror::Error;

/// Errors raised by the library. Analysis findings (a non-ideal curve, a
/// failed theorem check) are report content and never surface here.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("abscissa {x} outside operating range [{min}, {max}]")]
    Domain { x: f64, min: f64, max: f64 },

    #[error("derivative order {requested} exceeds capability {available}")]
    Capability { requested: usize, available: usize },

    #[error("two-branch curve needs an explicit branch selector")]
    BranchRequired,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid configuration: {field}: {reason}")]
    Config { field: String, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
