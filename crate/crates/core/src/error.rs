//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("report record for block {block} in period {period} has no outcome")]
    MissingOutcome { block: u32, period: u32 },

    #[error("unknown block id {0}")]
    UnknownBlock(u32),

    #[error("feature count mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("outcomes contain a single class; the quantity is undefined")]
    SingleClass,

    #[error("note for block {block} in period {period} matched no rule")]
    UnmatchedNote { block: u32, period: u32 },

    #[error(
        "only {available} scored blocks with outcomes are available for top-{requested} selection"
    )]
    NotEnoughScored { requested: usize, available: usize },

    #[error("fewer than two non-empty bins; slope is undefined")]
    DegenerateBins,

    #[error("no training windows end at or before period {eval_start}; earliest feasible eval start is {earliest_feasible}")]
    NoTrainingData {
        eval_start: u32,
        earliest_feasible: u32,
    },

    #[error("{eligible} blocks are eligible for a sample of {requested} ({per_bin})")]
    InsufficientEligible {
        requested: usize,
        eligible: usize,
        per_bin: String,
    },

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    UnsupportedModelVersion { found: u64, supported: u64 },

    #[error("csv header mismatch: expected {expected:?}, got {actual:?}")]
    CsvHeader { expected: String, actual: String },

    #[error("io error")]
    Io(#[from] std::io::Error),

    #[error("csv error")]
    Csv(#[from] csv::Error),

    #[error("json error")]
    Json(#[from] serde_json::Error),
}
