//! Crate-wide error type.

use thiserror::Error;

use crate::landscape::LandscapeGraph;

/// Errors produced by instance handling, solvers, and analyses.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension/cardinality/shape precondition was violated.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An integer quantity does not fit its type (e.g. solution counts).
    #[error("value out of range: {0}")]
    Range(String),

    /// An enumeration or size guard refused to proceed.
    #[error("cap exceeded: {what} requires {required}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u64,
        cap: u64,
    },

    /// Invalid search or subset configuration (bad K, bad dims, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A claimed permutation is not a permutation of {1..N}.
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed instance file (bad magic, version, header, or length).
    #[error("malformed instance file: {0}")]
    Format(String),

    /// Stored checksum does not match the coefficient payload.
    #[error("checksum mismatch: header says {expected:#018x}, payload sums to {actual:#018x}")]
    Checksum { expected: u64, actual: u64 },

    /// Landscape exploration hit its node or edge cap; the partial graph
    /// built so far is carried along for inspection or export.
    #[error("exploration cap exceeded: {what} cap {cap} reached")]
    ExploreCapExceeded {
        what: &'static str,
        cap: u64,
        partial: Box<LandscapeGraph>,
    },

    /// A correlation is undefined because one coordinate has zero variance
    /// (or fewer than two usable points). Deliberately distinct from 0.0.
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),
}
