use dstlab_core::Error;
use thiserror::Error;

/// A failed run, grouped by exit code.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("divergence: {0}")]
    Divergence(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Divergence(_) => 4,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure::Validation(msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DivergenceDetected { .. } => Failure::Divergence(e.to_string()),
            Error::IndexOutOfRange { .. }
            | Error::Dimension(_)
            | Error::InvalidInput(_)
            | Error::InfeasibleRank { .. }
            | Error::InfeasibleKappa { .. }
            | Error::Unbounded { .. }
            | Error::GridCoverage { .. }
            | Error::Serialization(_) => Failure::Validation(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(format!("csv: {e}"))
    }
}
