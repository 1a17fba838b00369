use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LicsError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("scan aborted at delta = {delta}: {source}")]
    Scan {
        delta: f64,
        #[source]
        source: Box<LicsError>,
    },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, LicsError>;
