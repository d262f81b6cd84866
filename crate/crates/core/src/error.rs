use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("invalid pulse spec: {0}")]
    InvalidPulse(String),
    #[error("SLR design failed: {0}")]
    SlrDesign(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("propagation error: {0}")]
    Propagation(String),
    #[error("ensemble error: {0}")]
    Ensemble(String),
    #[error("optimization error: {0}")]
    Optimization(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
