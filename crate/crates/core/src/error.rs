use thiserror::Error;

/// Errors raised by the numeric routines and the command-line layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive enumeration was requested at a size it cannot handle.
    #[error("enumeration guard: {0}")]
    Guard(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A dense submatrix would exceed the configured memory budget.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `Err(Error::Domain)` with a formatted message when `cond` is false.
/// Comparisons against NaN are false, so NaN inputs are rejected.
macro_rules! ensure_domain {
    ($cond:expr, $($arg:tt)*) => {{
        let holds: bool = $cond;
        if !holds {
            return Err($crate::error::Error::Domain(format!($($arg)*)));
        }
    }};
}

pub(crate) use ensure_domain;
