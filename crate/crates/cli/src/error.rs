use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Syntax errors carry a 1-based line and column.
    #[error("{source_name}:{line}:{column}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("numeric error: {0}")]
    Numeric(#[from] quup::Error),
    /// Oracle checks that ran but missed their threshold.
    #[error("{0} verification check(s) failed")]
    Verification(usize),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Config { .. } => 2,
            // a domain error from the library is a bad input value
            CliError::Numeric(quup::Error::Domain { .. }) => 2,
            CliError::Numeric(_) | CliError::Verification(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
