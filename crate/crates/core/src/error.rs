use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed stream: {0}")]
    Malformed(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("cannot take {requested} strings of length {t}: only 2^{t} exist")]
    DomainExhausted { t: usize, requested: usize },

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("input has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search cap of {cap} exceeded")]
    CapExceeded { cap: u64 },

    #[error("inconsistent sample: {0}")]
    InconsistentSample(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
