//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, AuditError>;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("axis list is empty")]
    EmptyAxes,

    #[error("axis `{axis}`: {reason}")]
    InvalidAxis { axis: String, reason: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid group key: {0}")]
    InvalidKey(String),

    #[error("cannot parse group key `{input}`: {reason}")]
    KeyParse { input: String, reason: String },

    #[error("invalid group assignment at row {row}: {reason}")]
    InvalidAssignment { row: usize, reason: String },

    #[error("example index {index} out of range for {len} examples")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("alpha {0} outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("deficiency value {0} outside [0, 1]")]
    InvalidDeficiency(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no scorable groups: {defined} defined group(s), at least 2 required")]
    NoScorableGroups { defined: usize },

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("planted rate {rate} is not representable with {count} examples")]
    NonRepresentableRate { rate: f64, count: u64 },

    #[error("extreme-value ordering violated: {0}")]
    OrderingViolation(String),
}
