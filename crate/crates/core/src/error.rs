//! Crate-wide error type.

use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("non-canonical form at position {position}: {message}")]
    NonCanonical { position: usize, message: String },

    #[error("{0} is not a limit ordinal")]
    NotLimit(String),

    #[error("fundamental sequence index must be at least 1")]
    ZeroIndex,

    #[error("ordering violation: {0}")]
    Order(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ordinal {value} is outside the universe bound {bound}")]
    OutOfUniverse { value: String, bound: String },

    #[error("set is not finitely enumerable: {0}")]
    NotEnumerable(String),

    #[error("walk toward {target} stalled at {at}: {reason}")]
    WalkStalled {
        at: String,
        target: String,
        reason: String,
    },

    #[error("invalid set handle: {0}")]
    InvalidSet(String),

    #[error("invalid branch family: {0}")]
    InvalidFamily(String),

    #[error("index {index} outside a family of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("magma variant mismatch: {0}")]
    VariantMismatch(String),

    #[error("invalid magma element: {0}")]
    InvalidElement(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown invariant suite '{0}'")]
    UnknownSuite(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
