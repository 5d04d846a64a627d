use std::path::Path;

use fgn_core::FgnError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("degenerate trace: {0}")]
    Degenerate(String),
    #[error("minimizer stopped at a search boundary (h_hat={0})")]
    Boundary(f64),
    #[error("clamp fraction {0:.4} exceeds 10%; the Gaussian count model is suspect")]
    Suspect(f64),
    #[error(transparent)]
    Core(FgnError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Parse(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Boundary(_) => 5,
            CliError::Suspect(_) => 6,
        }
    }
}

impl From<FgnError> for CliError {
    fn from(e: FgnError) -> Self {
        match e {
            FgnError::DegenerateTrace => CliError::Degenerate(e.to_string()),
            other => CliError::Core(other),
        }
    }
}
