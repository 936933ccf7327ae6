use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("bracket [{lo}, {hi}] does not enclose the target")]
    Bracket { lo: f64, hi: f64 },
    #[error("index {index} lies beyond the evidence window (last available index {last})")]
    OutOfEvidence { index: usize, last: usize },
    #[error("coefficient table too short: about {needed} coefficients required, {available} available")]
    TableTooShort { needed: usize, available: usize },
    #[error("saddle equation needs k >= {k_min}, got k = {k}")]
    BelowThreshold { k: i64, k_min: i64 },
    #[error("enumeration budget exceeded: {count} items requested, budget {budget}")]
    Budget { count: u128, budget: u128 },
    #[error("precision exhausted at {bits} bits: {what}")]
    Precision { bits: u32, what: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed cache file: field `{field}`: {reason}")]
    Cache { field: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
