use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity must be at least 1")]
    InvalidCapacity,

    #[error("incompatible summaries: capacities {left} and {right}, expected {expected}")]
    IncompatibleSummaries {
        left: usize,
        right: usize,
        expected: usize,
    },

    #[error("worker count must be at least 1")]
    InvalidWorkers,

    #[error("hybrid shape {processes} x {threads} does not give {workers} workers")]
    InvalidHybridShape {
        processes: usize,
        threads: usize,
        workers: usize,
    },

    #[error("universe must be at least 1")]
    InvalidUniverse,

    #[error("skew must be positive and finite, got {0}")]
    InvalidSkew(f64),

    #[error("relative error is undefined for an item with true frequency 0")]
    UndefinedRelativeError,

    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
