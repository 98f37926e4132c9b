use std::path::PathBuf;

use thiserror::Error;

/// Exit status contract: 0 success, 2 parse, 3 validation, 4 rule reject,
/// 5 bad query.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("composition rejected by rule")]
    Rejected,
    #[error("bad query: {0}")]
    Query(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Invalid { .. } => 3,
            CliError::Rejected => 4,
            CliError::Query(_) => 5,
        }
    }
}
