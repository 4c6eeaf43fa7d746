use thiserror::Error;

/// Errors raised across the library.
///
/// The variants map onto the process exit codes used by the command-line
/// front end: domain violations exit with 3, size-budget violations with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported size: {0}")]
    Unsupported(String),

    /// A consistency check failed inside a computation (for example a
    /// MacWilliams sum that is not divisible by 2^p). Signals a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 usage, 3 domain, 4 size budget, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Domain(_) | Error::Checkpoint(_) => 3,
            Error::Unsupported(_) => 4,
            Error::Internal(_) | Error::Io(_) | Error::Json(_) => 1,
        }
    }
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}

macro_rules! unsupported {
    ($($arg:tt)*) => { $crate::error::Error::Unsupported(format!($($arg)*)) };
}

macro_rules! internal {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}

pub(crate) use {domain, internal, unsupported};
