use std::path::PathBuf;

use speclab::bounds::BoundsError;
use speclab::calculus::CalculusError;
use speclab::domain::DomainError;
use speclab::linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: invalid {what}: {message}")]
    Invalid {
        path: PathBuf,
        what: &'static str,
        message: String,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

impl From<CalculusError> for CliError {
    fn from(e: CalculusError) -> Self {
        Self::Bounds(e.into())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        Self::Bounds(e.into())
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        Self::Bounds(e.into())
    }
}

impl CliError {
    /// 1 for failed verifications, 2 for unmet preconditions, 3 for I/O and
    /// parse problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Bounds(_) => 2,
            Self::Io { .. } | Self::Parse { .. } | Self::Invalid { .. } => 3,
        }
    }
}
