use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PnError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An existence result that should hold was not reproduced numerically.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, PnError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(PnError::InvalidArgument(msg.into()))
}
