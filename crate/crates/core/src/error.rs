//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced while building tables or evaluating measures.
#[derive(Debug, Error)]
pub enum ValidityError {
    /// A labeling with zero objects was supplied.
    #[error("empty labeling: at least one (class, cluster) pair is required")]
    EmptyLabeling,

    /// An input is structurally valid but has no meaningful value for the
    /// requested quantity (all-zero marginal, zero pair count, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A table failed an internal consistency check.
    #[error("inconsistent table: {0}")]
    Inconsistent(String),

    /// Model parameters violate the family's validity rules.
    #[error("invalid model parameters: {}", reasons.join("; "))]
    InvalidModel { reasons: Vec<String> },

    /// A label file could not be parsed.
    #[error("label file, line {line}: {message}")]
    LabelFile { line: u64, message: String },
}

pub type Result<T> = std::result::Result<T, ValidityError>;
