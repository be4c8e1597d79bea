use thiserror::Error;

/// Errors raised by the arithmetic, lattice and solver layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: operands live in different quadratic fields")]
    FieldMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("root isolation failed: {0}")]
    RootIsolation(String),

    #[error("rank deficient basis")]
    RankDeficient,

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("reduction failed: {0}")]
    ReductionFailed(String),

    #[error("enumeration bound {bound} exceeds cap {cap}")]
    EnumerationCap { bound: String, cap: u64 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse { column, message: message.into() }
    }
}
