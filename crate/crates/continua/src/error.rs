//! Shared error type for the library.
//!
//! Every fallible operation returns [`Result`]. Variants are coarse on purpose:
//! callers branch on the handful of situations that matter (parse failures with a
//! line number, domain/range violations, structural validation), and the message
//! carries the specifics.

/// Library-wide error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A text input (presentation, table, tree, net, or report file) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A structural validation failed (bad parameters, non-canonical data, misuse
    /// of a stage machine).
    #[error("{0}")]
    Invalid(String),

    /// An index referred to a point, column, or node that does not exist.
    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },

    /// An evaluation was requested outside the domain where the value is determined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The value at a tooth tip depends on how an open column keeps growing, so no
    /// finite table determines it.
    #[error("tip value undetermined: column {column} is marked open")]
    OpenTip { column: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Convenience constructor for parse errors.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Convenience constructor for validation errors.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
