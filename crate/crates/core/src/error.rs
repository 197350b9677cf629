use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsharpness parameter {0} is outside [0, 1]")]
    BadEta(f64),
    #[error("count {got} is below the minimum of {min}")]
    BadCount { got: usize, min: usize },
    #[error("{0} axes exceed the exhaustive enumeration limit of 20")]
    TooManyAxes(usize),
    #[error("{0} variables exceed the enumeration limit")]
    TooManyVars(usize),
    #[error("matrix is not Hermitian (distance {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("shot count must be at least 1")]
    BadShots,
    #[error("outcome probability {0:e} is too small to condition on")]
    ZeroProbability(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid correlations: {0}")]
    InvalidCorrelations(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadEta(_) => "bad_eta",
            Error::BadCount { .. } => "bad_count",
            Error::TooManyAxes(_) => "too_many_axes",
            Error::TooManyVars(_) => "too_many_vars",
            Error::NotHermitian(_) => "not_hermitian",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BadIndex(_) => "bad_index",
            Error::BadShots => "bad_shots",
            Error::ZeroProbability(_) => "zero_probability",
            Error::InvalidState(_) => "invalid_state",
            Error::InvalidCorrelations(_) => "invalid_correlations",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
