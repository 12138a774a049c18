use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mixing ranks, foreign elements, malformed descriptors.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The search explored more nodes than the configured cap.
    #[error("search cap of {cap} nodes exceeded")]
    Resource { cap: usize },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Two engines or an engine and an oracle disagree.
    #[error("verification mismatch: {0}")]
    Mismatch(String),

    /// Two terms of the same degree in a polynomial.
    #[error("polynomial is not pure: duplicate degree {0}")]
    Purity(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
