use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input vector is empty")]
    EmptyVector,

    #[error("negative entry {value} at row {row}, column {column} (1-based)")]
    NegativeEntry { row: usize, column: usize, value: f64 },

    #[error("non-finite entry at row {row}, column {column} (1-based)")]
    NonFiniteEntry { row: usize, column: usize },

    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("s = {s} out of range {min}..={max}")]
    SOutOfRange { s: usize, min: usize, max: usize },

    #[error("degenerate threshold: {reason}")]
    DegenerateThreshold { reason: String },

    #[error("degenerate tail: the k largest values are all equal")]
    DegenerateTail,

    #[error("no usable grid point: {reason}")]
    EmptyGrid { reason: String },

    #[error("invalid direction: {reason}")]
    InvalidDirection { reason: String },

    #[error("invalid probability vector: {reason}")]
    InvalidProbabilityVector { reason: String },

    #[error("dimension mismatch: {reason}")]
    DimensionMismatch { reason: String },

    #[error("dimension d = {d} too large for exact confusion counts (max 30); use F1 on explicit direction sets instead")]
    DimensionTooLarge { d: usize },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("csv parse error at row {row}, column {column} (1-based): {reason}")]
    CsvParse { row: usize, column: usize, reason: String },

    #[error("ragged csv row {row}: expected {expected} columns, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("unsupported output format: {reason}")]
    UnsupportedFormat { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for data degeneracies (as opposed to malformed input): the CLI
    /// maps these to exit code 2.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateThreshold { .. } | Error::DegenerateTail | Error::EmptyGrid { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
