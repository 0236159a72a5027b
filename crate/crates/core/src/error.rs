use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error)]
pub enum RhlsError {
    /// A parameter lies outside the domain required by an operation.
    #[error("invalid {param} = {value}: expected {expected}")]
    Domain {
        param: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A named option that is not one of the accepted choices.
    #[error("unknown {param} '{value}': expected {expected}")]
    Choice {
        param: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("inconsistent exponent set: {0}")]
    InconsistentExponents(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RhlsError>;

pub(crate) fn domain<T>(param: &'static str, value: f64, expected: &'static str) -> Result<T> {
    Err(RhlsError::Domain { param, value, expected })
}
