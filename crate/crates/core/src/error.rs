use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input arity mismatch: expected {expected} bits, got {got}")]
    InputArity { expected: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("budget exceeded: {needed} candidates exceed the budget of {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("synthesis error: {0}")]
    Synthesis(String),

    #[error("witness error: {0}")]
    Witness(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
