use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("field has {got} samples but the grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("derivative order {0} is not supported (expected 1, 2 or 3)")]
    InvalidOrder(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid window [{a}, {b}]: {reason}")]
    InvalidWindow { a: f64, b: f64, reason: String },

    #[error("scaling law undefined at t = {0} (dynamic mode requires t >= 2)")]
    ScalingDomain(f64),

    #[error("inadmissible Gardner breather: Delta = alpha^2 + beta^2 - 2/(9 mu) = {delta} must be positive")]
    Inadmissible { delta: f64 },

    #[error("numerical blow-up at t = {time}: {reason}")]
    BlowUp { time: f64, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("snapshot parse error at byte {offset}: {reason}")]
    SnapshotParse { offset: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BlowUp { .. } => 3,
            Error::Io { .. } => 1,
            _ => 2,
        }
    }
}
