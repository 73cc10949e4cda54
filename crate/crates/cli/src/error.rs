use std::path::Path;

use thiserror::Error;

/// Failures surfaced to the user. The variant decides the exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration; nothing was processed.
    #[error("{0}")]
    Usage(String),

    /// Unreadable or malformed data, or a failure while processing it.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }

    /// A library error raised while checking the configuration.
    pub fn config(err: wavecast::Error) -> Self {
        CliError::Usage(err.to_string())
    }

    /// A library error raised while processing data.
    pub fn run(err: wavecast::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
