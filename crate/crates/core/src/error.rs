use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested object exceeds the configured dense-storage cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An argument violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A value failed numerical validation (hermiticity, normalization, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Model parameters are inconsistent with the declared geometry.
    #[error("configuration error: {0}")]
    Config(String),

    /// A protocol step was requested that the model does not support.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// The model declares no splitting or exact rule usable here.
    #[error("unsupported model: {0}")]
    Unsupported(String),

    /// A monitored numerical tolerance was exceeded during a run.
    #[error("numerical tolerance failure: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
