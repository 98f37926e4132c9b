use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use coalflow::metapolicy::{CompositionRule, RuleError};
use coalflow::{CommonRepresentation, CrError, PolicyError, SourcePolicy};
use serde::Serialize;

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, message: impl ToString) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

fn invalid_err(path: &Path, message: impl ToString) -> CliError {
    CliError::Invalid {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

pub fn load_cr(path: &Path) -> Result<CommonRepresentation, CliError> {
    CommonRepresentation::from_json(&read(path)?).map_err(|e| match e {
        CrError::Parse(_) => parse_err(path, e),
        other => invalid_err(path, other),
    })
}

pub fn load_policy(path: &Path) -> Result<SourcePolicy, CliError> {
    SourcePolicy::from_json(&read(path)?).map_err(|e| match e {
        PolicyError::Parse(_) => parse_err(path, e),
        other => invalid_err(path, other),
    })
}

pub fn load_rule(path: &Path) -> Result<CompositionRule, CliError> {
    CompositionRule::from_json(&read(path)?).map_err(|e| match e {
        RuleError::Parse(_) => parse_err(path, e),
        other => invalid_err(path, other),
    })
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization is infallible");
    s.push('\n');
    s
}
