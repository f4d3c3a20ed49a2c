use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The variants are coarse on purpose: the CLI maps them to exit codes and
/// the C interface maps them to status codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// The brute-force oracle and the structural characterization disagreed.
    #[error("oracle/theorem mismatch: {0}")]
    ModeMismatch(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($arg)*))
    };
}

macro_rules! precondition {
    ($($arg:tt)*) => {
        $crate::error::Error::Precondition(format!($($arg)*))
    };
}

pub(crate) use invalid;
pub(crate) use precondition;
