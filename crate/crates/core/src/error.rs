use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable rosters differ: [{0}] vs [{1}]")]
    RosterMismatch(String, String),

    #[error("undefined variable `{0}`")]
    UndefinedVariable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("not a unit (vanishing constant term): {0}")]
    NotUnit(String),

    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    #[error("codimension is infinite or was not certified below degree {0}")]
    InfiniteCodimension(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
