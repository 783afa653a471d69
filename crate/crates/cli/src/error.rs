use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("scenario {}: {reason}", path.display())]
    Scenario { path: PathBuf, reason: String },
    #[error(transparent)]
    Core(#[from] qvk::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qvk::Error::NotUnitary(_)) => 3,
            CliError::Core(qvk::Error::SynthesisFailed(_)) => 4,
            CliError::Scenario { .. } => 5,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
