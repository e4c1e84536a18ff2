use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    ContextMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero vector is not a physical state")]
    NonPhysicalState,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The ordered range of the field is too small for the computation;
    /// `needed_k` is the least run length that would accommodate it.
    #[error("ordered range too small: need k >= {needed_k}, field provides k = {available_k}")]
    RangeOverflow { needed_k: u64, available_k: u64 },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
