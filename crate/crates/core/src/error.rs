use thiserror::Error;

use crate::numeric::to_strings;
use num_bigint::BigInt;

/// Errors raised by the library. Outcomes that are ordinary values
/// (such as a missing cover or an undecided comparison) are not errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tau: {0}")]
    InvalidTau(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision exhausted comparing {a:?} and {b:?}")]
    PrecisionExhausted { a: Vec<String>, b: Vec<String> },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("linear form vanishes on {0:?}")]
    ZeroValue(Vec<String>),
    #[error("no coprime partial quotient in the scan window at step {0}")]
    CoprimeWindowExhausted(usize),
    #[error("vectors are linearly dependent")]
    Degenerate,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search range too large: {0}")]
    RangeTooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn exhausted(a: &[BigInt], b: &[BigInt]) -> Self {
        Error::PrecisionExhausted {
            a: to_strings(a),
            b: to_strings(b),
        }
    }

    /// Short machine-readable code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidTau(_) => "INVALID_TAU",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::PrecisionExhausted { .. } => "PRECISION_EXHAUSTED",
            Error::InsufficientData(_) => "INSUFFICIENT_DATA",
            Error::ZeroValue(_) => "ZERO_VALUE",
            Error::CoprimeWindowExhausted(_) => "COPRIME_WINDOW_EXHAUSTED",
            Error::Degenerate => "DEGENERATE",
            Error::RankMismatch { .. } => "RANK_MISMATCH",
            Error::InvalidTemplate(_) => "INVALID_TEMPLATE",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::RangeTooLarge(_) => "RANGE_TOO_LARGE",
            Error::Parse(_) => "PARSE_ERROR",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
