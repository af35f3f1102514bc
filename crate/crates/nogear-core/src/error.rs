//! Error type shared across the crate.

use alloc::string::String;

/// Errors produced by model construction, matrix building, estimation, and
/// the experiment harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter constraint failed; the message names the violated
    /// inequality (e.g. `"beta < alpha violated"`).
    ConstraintViolation(String),
    /// The truncation bound discards too much probability mass for these
    /// parameters.
    TruncationTooSevere {
        /// Truncation bound that was requested.
        m: usize,
        /// First offending row.
        row: usize,
        /// Tail mass discarded on that row.
        mass: f64,
    },
    /// A forecast origin lies outside the truncated state space.
    OriginOutOfRange {
        /// Requested origin state.
        origin: usize,
        /// Truncation bound of the matrix.
        m: usize,
    },
    /// The series is constant and carries no transition information.
    DegenerateSeries,
    /// A series is too short for the requested operation.
    SeriesTooShort {
        /// Observed length.
        len: usize,
        /// Minimum required length.
        min: usize,
    },
    /// Paired lists have different lengths.
    LengthMismatch {
        /// Length of the first list.
        left: usize,
        /// Length of the second list.
        right: usize,
    },
    /// AICc is undefined because `n_eff <= k + 1`.
    AiccUndefined {
        /// Effective sample size.
        n_eff: usize,
        /// Number of parameters.
        k: usize,
    },
    /// An experiment configuration is invalid.
    InvalidConfig(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::ConstraintViolation(msg) => write!(f, "constraint violation: {msg}"),
            Error::TruncationTooSevere { m, row, mass } => write!(
                f,
                "truncation too severe: row {row} of the M={m} matrix discards tail mass {mass:.3e}"
            ),
            Error::OriginOutOfRange { origin, m } => {
                write!(f, "origin {origin} out of range for truncation bound M={m}")
            }
            Error::DegenerateSeries => write!(f, "series is constant; no transition information"),
            Error::SeriesTooShort { len, min } => {
                write!(f, "series length {len} below required minimum {min}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::AiccUndefined { n_eff, k } => {
                write!(f, "AICc undefined for n_eff={n_eff}, k={k}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
