use thiserror::Error;

/// Unified error type for the crate.
///
/// Variants distinguish caller mistakes (`Config`, `Input`, `IndexOutOfRange`,
/// `DimensionMismatch`) from runtime failures (`Numerical`, `Estimation`) and
/// I/O or serialization problems. CLI exit codes map `Config`/`Input`-style
/// errors to 1 and statistical check failures to 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("coefficient index {index} out of range for T = {total}")]
    IndexOutOfRange { index: usize, total: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("estimation error: {0}")]
    Estimation(String),
    #[error("selection error: {0}")]
    Selection(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
