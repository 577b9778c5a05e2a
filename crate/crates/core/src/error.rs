//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant renders as a single line so that the command-line front end
/// can forward it verbatim as a machine-parsable reason.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("capacity exceeded: {what} has {count} members, cap is {cap}")]
    CapacityExceeded { what: String, count: String, cap: u64 },

    #[error("index set mixes orders {0} and {1}")]
    MixedOrders(u32, u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("negative entry at position {0}")]
    NegativeEntry(usize),

    #[error("coefficient of {0} is NaN")]
    NanCoefficient(String),

    #[error("unknown reference curve: {0}")]
    UnknownCurve(String),
}

impl Error {
    /// True for errors caused by a size or enumeration cap.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::CapacityExceeded { .. })
    }
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;
