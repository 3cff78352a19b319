//! Error type shared by the whole crate.
//!
//! Every variant carries a stable machine-readable code, exposed through
//! [`Error::code`]. The CLI prints these codes on stderr so scripts can match
//! on them without parsing prose.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed number: {0:?}")]
    MalformedNumber(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("transpositions overlap at index {0}")]
    OverlappingPairs(usize),

    #[error("index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{what} size {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("entries are not pairwise distinct (positions {0} and {1})")]
    DuplicateEntries(usize, usize),

    #[error("input is empty")]
    EmptyInput,

    #[error("value at position {0} is not strictly positive")]
    NonPositiveValue(usize),

    #[error("sums are not pairwise distinct: {0}")]
    DistinctnessViolation(String),

    #[error("pair family is empty")]
    EmptyFamily,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points not in general position (witness subset {0:?})")]
    NotInGeneralPosition(Vec<usize>),

    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("direction has zero norm")]
    ZeroNormDirection,

    #[error("duplicate points at positions {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("selected points are not collinear")]
    NotCollinear,

    #[error("pair selection exhausted after {found} of {target} pairs")]
    NoValidPair { found: usize, target: usize },

    #[error("no certificate construction applies to this input")]
    CertificateUnavailable,

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedNumber(_) => "MalformedNumber",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotAPermutation(_) => "NotAPermutation",
            Error::OverlappingPairs(_) => "OverlappingPairs",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::TooLarge { .. } => "TooLarge",
            Error::DuplicateEntries(..) => "DuplicateEntries",
            Error::EmptyInput => "EmptyInput",
            Error::NonPositiveValue(_) => "NonPositiveValue",
            Error::DistinctnessViolation(_) => "DistinctnessViolation",
            Error::EmptyFamily => "EmptyFamily",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotInGeneralPosition(_) => "NotInGeneralPosition",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::ZeroNormDirection => "ZeroNormDirection",
            Error::DuplicatePoints(..) => "DuplicatePoints",
            Error::NotCollinear => "NotCollinear",
            Error::NoValidPair { .. } => "NoValidPair",
            Error::CertificateUnavailable => "CertificateUnavailable",
            Error::ZeroSamples => "ZeroSamples",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Invariant(_) => "Invariant",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
