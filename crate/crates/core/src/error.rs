use std::io;

/// Everything that can go wrong while loading data or computing a metric.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed npy header: {0}")]
    MalformedHeader(String),

    #[error("unsupported dtype {0:?}: expected little-endian float32 or float64")]
    UnsupportedDtype(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("expected a 2-D array, found {0} dimension(s)")]
    Not2D(usize),

    #[error("ragged rows: line {line} has {found} column(s), expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("cannot parse {text:?} at line {line}, column {col} as a number")]
    Parse {
        line: usize,
        col: usize,
        text: String,
    },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error("bad projection dimensions: cannot map {source_dim} to {target_dim} dimension(s)")]
    BadDims {
        source_dim: usize,
        target_dim: usize,
    },

    #[error("dimension mismatch: {left} vs {right} columns")]
    DimMismatch { left: usize, right: usize },

    #[error("k = {k} is too large for {rows} reference row(s)")]
    KTooLarge { k: usize, rows: usize },

    #[error("need at least {min} rows, found {rows}")]
    TooFewRows { rows: usize, min: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    BadAlpha(f64),

    #[error("bootstrap repeat count must be at least 1")]
    ZeroRepeats,

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("bad scenario: {0}")]
    BadSpec(String),

    #[error("row count mismatch: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },

    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
