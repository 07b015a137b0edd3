use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate quadratic form: {0}")]
    Degenerate(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
    #[error("non-integral count: {0}")]
    NonIntegral(String),
    /// An internal consistency check failed; indicates a bug, never bad input.
    #[error("consistency check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Return `Error::Check` with a formatted message unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Check(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
