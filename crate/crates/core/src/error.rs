//! Error taxonomy shared by every module in the crate.
//!
//! The split mirrors how callers recover: [`Error::Domain`] and
//! [`Error::Range`] are caller bugs (bad input or a query past a table's
//! limit), [`Error::Resource`] is a refusal to allocate past the configured
//! budget, and [`Error::Inconclusive`] means a numeric decision sat too close
//! to a discontinuity to resolve even at escalated precision. Inconclusive
//! results are never silently rounded; they surface here so reports can count
//! them.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates an operation's hypothesis, e.g. an even modulus where an
    /// odd one is required.
    #[error("domain error: {0}")]
    Domain(String),

    /// Query exceeds the limit a table was built for.
    #[error("range error: {what} = {value} exceeds table limit {limit}")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// Building a table of the requested size would blow the memory budget.
    #[error(
        "resource error: limit {limit} needs about {required_bytes} bytes, \
         budget is {budget_bytes}"
    )]
    Resource {
        limit: u64,
        required_bytes: u64,
        budget_bytes: u64,
    },

    /// A ceiling/floor decision could not be resolved: the value sits within
    /// the inconclusive threshold of an integer even at escalated precision.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A sieve cache file was rejected (bad magic, checksum, or contents).
    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the variants that indicate an unusable answer rather than a
    /// bad question; used by scanners to decide what to record.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }
}
