use std::path::PathBuf;

use thiserror::Error;

/// Anything that stops a scenario from producing a report. All of these map
/// to exit code 1; failed checks are carried by the report instead.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: line {line}, column {column}, at `{field}`: {message}")]
    Schema { path: String, line: usize, column: usize, field: String, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown suite `{0}` (known: invariance, transgression, multiplicativity, cs-gauge)")]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] deligne_toolkit::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
