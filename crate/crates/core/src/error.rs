use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two functions or assignments over different variable universes.
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    /// A size limit of a dense representation was exceeded.
    #[error("capacity exceeded: {what} has {got} variables, limit is {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// The operation is undefined for the given argument (e.g. a cofactor
    /// relative to the zero function, the SAT set of an empty clause).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Bad arguments from the caller (index out of range, zero threshold, ...).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification failed: {0}")]
    Verify(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
