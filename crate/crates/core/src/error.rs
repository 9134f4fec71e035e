use thiserror::Error;

/// Errors raised by the library. Parsing errors carry 1-based line numbers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    NotOddPrime(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),

    #[error("invalid action data: B[{index}] {reason}")]
    InvalidAction { index: usize, reason: String },

    #[error("invalid Q-module: {0}")]
    InvalidModule(String),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid extension data: {0}")]
    InvalidExtension(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown dataset {name:?}; available: {}", available.join(", "))]
    UnknownDataset {
        name: String,
        available: Vec<&'static str>,
    },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("genus check failed for p={p}: H1(X) has dimension {found}, expected {expected}")]
    GenusMismatch {
        p: u32,
        expected: usize,
        found: usize,
    },

    #[error("norm lies outside Z[zeta_p]: {0}")]
    NotInSubring(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
