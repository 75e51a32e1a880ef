//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DdError {
    /// Two objects that must act on the same register do not.
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A guard against accidental memory or time blowups.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The arguments are outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical precondition (Hermiticity, unitarity, ...) failed.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A run description is inconsistent or incomplete.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Evolution left the numerically trustworthy regime.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The request is well-formed but not supported by this construction.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Text could not be parsed as a Pauli string, group file or config.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DdError>;
