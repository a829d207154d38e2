use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for a failed check or acceptance criterion.
pub const EXIT_FAILURE: i32 = 1;
/// Process exit code for unreadable input or a bad configuration.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum IerError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}line {line}: {message}", origin.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse { origin: Option<PathBuf>, line: usize, message: String },

    #[error("{}{source}", origin.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Json { origin: Option<PathBuf>, source: serde_json::Error },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("simulation: {0}")]
    Sim(#[from] ier_core::Error),

    #[error("check failed: {0}")]
    Failed(String),
}

impl IerError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IerError::Io { path: path.into(), source }
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        IerError::Parse { origin: None, line, message: message.into() }
    }

    /// Attaches the file a parse or JSON error came from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        match self {
            IerError::Parse { line, message, .. } => IerError::Parse { origin: Some(path.into()), line, message },
            IerError::Json { source, .. } => IerError::Json { origin: Some(path.into()), source },
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            IerError::Failed(_) => EXIT_FAILURE,
            IerError::Sim(ier_core::Error::IntegratorFailure { .. }) => EXIT_FAILURE,
            _ => EXIT_CONFIG,
        }
    }
}

impl From<serde_json::Error> for IerError {
    fn from(source: serde_json::Error) -> Self {
        IerError::Json { origin: None, source }
    }
}

pub type Result<T, E = IerError> = std::result::Result<T, E>;
