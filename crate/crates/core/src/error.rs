use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    ShapeMismatch { n: usize, expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (residual {residual:e} exceeds {tolerance:e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },

    #[error("eigenvalue {value:e} is below the clamp tolerance {tolerance:e}")]
    NegativeEigenvalue { value: f64, tolerance: f64 },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid_points must be at least 8, got {0}")]
    GridTooCoarse(usize),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("check {check}: hypothesis `{hypothesis}` violated (residual {residual:e})")]
    Hypothesis {
        check: String,
        hypothesis: String,
        residual: f64,
    },

    #[error("check {check} expects {expected} operand(s), got {got}")]
    Arity {
        check: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid ensemble spec: {0}")]
    Ensemble(String),

    #[error("invalid campaign config: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
