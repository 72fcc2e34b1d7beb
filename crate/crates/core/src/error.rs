use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("empty continued fraction")]
    EmptySpec,

    #[error("partial quotient at index {index} must be positive")]
    NonPositiveQuotient { index: usize },

    #[error("partial quotients exhausted at index {index}")]
    QuotientsExhausted { index: usize },

    #[error("sign not resolved within {cap} partial quotients")]
    ResolutionExceeded { cap: usize },

    #[error("operation requires an irrational (periodic) continued fraction")]
    Undecidable,

    #[error("no decomposition: {0}")]
    NoDecomposition(String),

    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("partition covers 1..={have}, need 1..={need}")]
    InsufficientPrefix { have: u64, need: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
