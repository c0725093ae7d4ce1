use thiserror::Error;

/// Errors raised by structural problems in the input. Failed mathematical
/// checks are reported in the check's report, not as errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("unknown simplex {0:?}")]
    UnknownSimplex(Vec<usize>),
    #[error("face {0:?} has no chart assigned")]
    Unassigned(Vec<usize>),
    #[error("missing cochain value on overlap {0:?}")]
    MissingOverlap(Vec<usize>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}
