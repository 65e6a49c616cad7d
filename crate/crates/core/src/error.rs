use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("vandermonde nodes must be positive and strictly increasing")]
    InvalidNodes,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("illegal transform: {0}")]
    IllegalTransform(String),
    #[error("invalid sign pattern: {0}")]
    InvalidPattern(String),
    #[error("no witness found: {0}")]
    WitnessNotFound(String),
    #[error("pattern search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: u64 },
    #[error("generator self-check failed: {0}")]
    GeneratorCheck(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
