use thiserror::Error;

/// Errors raised by constructions and parsers in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input that does not describe a valid object (bad JSON, unknown labels,
    /// violated structural invariants).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Two operands that must live over the same parent object do not.
    #[error("mismatched operands: {0}")]
    Mismatch(String),

    /// A precondition on a mathematical object failed (e.g. a cochain that is
    /// not a cocycle, a cocycle that is not normalized, a map that is not a
    /// section).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A size guard tripped before an enumeration could blow up.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// Internal consistency check failed; indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Malformed(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
