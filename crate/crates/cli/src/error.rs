use std::path::PathBuf;

use thiserror::Error;

/// Process exit status contract: 0 success, 1 I/O or runtime, 2 usage or validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Runtime = 1,
    Usage = 2,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("config {origin}: {message}")]
    Config { origin: String, message: String },
    #[error("{path}: row {row}: {message}")]
    DataRow {
        path: String,
        row: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Data { path: String, message: String },
    #[error(transparent)]
    Core(#[from] donorspin_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        use donorspin_core::Error as E;
        match self {
            CliError::Io { .. } => ExitCode::Runtime,
            CliError::Core(E::NoConvergence { .. } | E::NotSymmetric { .. }) => ExitCode::Runtime,
            _ => ExitCode::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
