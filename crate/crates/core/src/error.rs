//! Error type shared across the crate.
//!
//! Recoverable conditions (malformed input, refused workloads, unsupported
//! configurations) are reported through [`Error`]. Violations of documented
//! call contracts (dimension mismatches, out-of-range codes, empty input to
//! a selection routine) panic instead, like the standard library does.

use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    /// A single scalar token did not match the accepted grammar.
    #[error("invalid scalar {token:?} at offset {offset}: {message}")]
    ScalarSyntax {
        token: String,
        offset: usize,
        message: String,
    },

    /// An instance file failed to parse; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Structurally invalid instance data; every violation is listed.
    #[error("invalid instance: {}", violations.join("; "))]
    Validation { violations: Vec<String> },

    /// The requested combination of solver, goal, and comparison mode
    /// is not implemented.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Exhaustive enumeration was refused because the instance is too large.
    #[error("brute force refused: n = {n} exceeds the cap of {cap}")]
    BruteForceCap { n: usize, cap: usize },

    /// Materializing a match list pair-by-pair would exceed the caller's cap.
    #[error("match list holds {pairs} pairs, more than the cap of {cap}")]
    PairSetCap { pairs: u128, cap: u128 },

    /// A generator or benchmark description is out of range.
    #[error("invalid spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
