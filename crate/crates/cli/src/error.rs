use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("no admissible root: {0}")]
    NoRoot(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status.
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::NoRoot(_) => 4,
        }
    }
}

impl From<pem::StationaryError> for CliError {
    fn from(e: pem::StationaryError) -> Self {
        match e {
            pem::StationaryError::NoAdmissibleRoot { .. } => CliError::NoRoot(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}
