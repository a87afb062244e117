use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("rule `{0}` is not simulable")]
    NotSimulable(String),

    #[error("certification of `{rule}` failed: {component} expected {expected}, got {actual}")]
    Certification {
        rule: String,
        component: String,
        expected: String,
        actual: String,
    },

    #[error("protocol failed: {0}")]
    ProtocolFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
