use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("cyclic shift {tau} out of range for sequence length {len}")]
    InvalidShift { tau: i64, len: usize },

    #[error("invalid power-delay profile: {0}")]
    InvalidProfile(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pilot sequences do not share a common base sequence")]
    BaseMismatch,

    #[error("intra-cell orthogonality violated: {0}")]
    ConstraintViolation(String),

    #[error("search space of {candidates} plans exceeds the cap of {cap}; use the full-length or tone-group scheme")]
    SearchTooLarge { candidates: u128, cap: u128 },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("run {run_index} failed: {source}")]
    Run {
        run_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
