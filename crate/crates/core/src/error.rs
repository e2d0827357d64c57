//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed audio file {path}: {detail}")]
    Format { path: PathBuf, detail: String },

    #[error("unsupported codec in {path}: {detail}")]
    UnsupportedCodec { path: PathBuf, detail: String },

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("signal too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid annotation: {0}")]
    Annotation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("template not found: {0}")]
    TemplateNotFound(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("bad model file: {0}")]
    ModelFormat(String),

    #[error("alignment failed: {0}")]
    Alignment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
