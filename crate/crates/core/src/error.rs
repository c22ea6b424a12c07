use std::io;

use thiserror::Error;

/// Errors produced by the bundle reader and writer.
#[derive(Debug, Error)]
pub enum BundleError {
    #[error("unsupported bundle format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("payload checksum mismatch: header says {expected:08x}, payload hashes to {found:08x}")]
    Checksum { expected: u32, found: u32 },
    #[error("malformed bundle header: {0}")]
    Header(String),
    #[error("malformed edge record on line {line}: {reason}")]
    Record { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Work estimate (edges, classes or candidate pairs) above a limit.
    #[error("estimated size {estimate:.0} exceeds the budget of {budget}")]
    BudgetExceeded { estimate: f64, budget: u64 },
    #[error("insufficient halo: need a margin of {required} around the block, have {available}")]
    InsufficientHalo { required: u64, available: u64 },
    #[error("bisection did not converge; last bracket [{lo}, {hi}]")]
    NonConvergence { lo: f64, hi: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
