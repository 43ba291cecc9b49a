use thiserror::Error;

use crate::ring::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("{0}: zero input")]
    ZeroInput(&'static str),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),
}

/// A malformed element literal; `offset` is a byte offset into the literal.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} (at offset {offset})")]
pub struct LiteralError {
    pub offset: usize,
    pub message: String,
}
