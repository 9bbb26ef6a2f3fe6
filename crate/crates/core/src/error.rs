use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symbol `{name}` already registered as {existing}, requested {requested}")]
    KindConflict {
        name: String,
        existing: String,
        requested: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("expression has a zero or non-invertible body: {0}")]
    NonInvertibleBody(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("element is not in the span of the basis: {0}")]
    NotInSpan(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
