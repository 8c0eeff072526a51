use thiserror::Error;

/// Errors produced anywhere in the mapping or simulation pipeline.
///
/// Every variant has a stable machine-readable code (see [`Error::code`]);
/// the command-line front end prints it as the prefix of its single error line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("recurrence breakdown at n = {n}: {reason}")]
    Breakdown { n: usize, reason: String },

    #[error("insufficient recurrence coefficients: need {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation overflow at step {step}: discarded weight {weight:e} exceeds {threshold:e}")]
    TruncationOverflow { step: usize, weight: f64, threshold: f64 },

    #[error("non-Hermitian term: {0}")]
    NonHermitianTerm(String),

    #[error("dense system too large: dimension {dim} exceeds cap {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "E_INVALID_PARAMETER",
            Error::DivergentIntegral(_) => "E_DIVERGENT_INTEGRAL",
            Error::QuadratureFailure(_) => "E_QUADRATURE",
            Error::Breakdown { .. } => "E_BREAKDOWN",
            Error::InsufficientCoefficients { .. } => "E_INSUFFICIENT_COEFFICIENTS",
            Error::NotConverged(_) => "E_NOT_CONVERGED",
            Error::Domain(_) => "E_DOMAIN",
            Error::UnsupportedTopology(_) => "E_UNSUPPORTED_TOPOLOGY",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::TruncationOverflow { .. } => "E_TRUNCATION_OVERFLOW",
            Error::NonHermitianTerm(_) => "E_NON_HERMITIAN",
            Error::TooLarge { .. } => "E_TOO_LARGE",
            Error::Linalg(_) => "E_LINALG",
            Error::Config { .. } => "E_CONFIG",
            Error::Io(_) => "E_IO",
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
