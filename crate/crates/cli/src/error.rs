use std::path::Path;

use thiserror::Error;

/// Errors surfaced to the command line, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Data(String),

    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<dpmreg::Error> for CliError {
    fn from(e: dpmreg::Error) -> Self {
        match e {
            dpmreg::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            dpmreg::Error::Data(_) | dpmreg::Error::LengthMismatch { .. } => CliError::Data(e.to_string()),
            dpmreg::Error::Numerical(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
