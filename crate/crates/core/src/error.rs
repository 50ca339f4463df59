use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpkError {
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("operation requires integer coefficients, got {0}")]
    NotIntegers(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("torsion {factors:?} in arity {arity}: {context}")]
    Torsion {
        arity: usize,
        factors: Vec<i64>,
        context: String,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl OpkError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        OpkError::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        OpkError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, OpkError>;
