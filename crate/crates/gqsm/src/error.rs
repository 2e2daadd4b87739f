//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    /// A pattern set does not satisfy the structural constraints of the
    /// requested scheme. `pattern` is the first offending index, when the
    /// violation is tied to a specific pattern.
    #[error("scheme violation{}: {message}", match .pattern {
        Some(i) => format!(" at pattern {i}"),
        None => String::new(),
    })]
    SchemeViolation {
        pattern: Option<usize>,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumerating {count} patterns exceeds the cap of {cap}")]
    EnumerationCap { count: u64, cap: u64 },

    #[error("q_part {q_part} out of range 1..={max}")]
    QPartOutOfRange { q_part: usize, max: u64 },

    #[error("duplicate codewords at indices {first} and {second}")]
    DuplicateCodeword { first: usize, second: usize },

    #[error("matrix factorization failed: {0}")]
    Factorization(String),

    #[error("pattern file line {line}: {message}")]
    PatternParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
