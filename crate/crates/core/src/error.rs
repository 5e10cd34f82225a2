use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variant names double as the machine-readable reason printed by the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series diverges: {0}")]
    DivergentSeries(String),
    #[error("denominator parameter {0} is a nonpositive integer")]
    InvalidDenominator(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("point {0} outside the domain of the series representation")]
    OutOfDomain(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("moment matrix is singular: {0}")]
    SingularMomentMatrix(String),
    #[error("weight is not integrable: {0}")]
    NonIntegrable(String),
    #[error("expected {expected} zeros, found {found}")]
    ZeroCountMismatch { expected: usize, found: usize },
    #[error("zero search exhausted at {bound} after {found} of {wanted} zeros")]
    SearchExhausted { bound: String, found: usize, wanted: usize },
    #[error("cannot fit convergence order: {0}")]
    DegenerateFit(String),
    #[error("series did not meet its truncation target within {0} terms")]
    TruncationLimit(usize),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Variant name, used as the first token of CLI error lines.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivergentSeries(_) => "DivergentSeries",
            Error::InvalidDenominator(_) => "InvalidDenominator",
            Error::DegenerateParameters(_) => "DegenerateParameters",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::SingularMomentMatrix(_) => "SingularMomentMatrix",
            Error::NonIntegrable(_) => "NonIntegrable",
            Error::ZeroCountMismatch { .. } => "ZeroCountMismatch",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::DegenerateFit(_) => "DegenerateFit",
            Error::TruncationLimit(_) => "TruncationLimit",
            Error::InvalidPrecision(_) => "InvalidPrecision",
            Error::Parse(_) => "Parse",
            Error::Config(_) => "Config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
