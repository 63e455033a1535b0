use thiserror::Error;

/// Everything the library can reject. The CLI maps `Capacity` to its own
/// "too big" exit code; all other variants are plain validation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} features, got {got}")]
    Dimension { expected: u8, got: u8 },

    #[error("arity {requested} exceeds the cap of {cap} (table would need 2^{requested} entries)")]
    Capacity { requested: u32, cap: u8 },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("feature {feature} out of range 1..={arity}")]
    Feature { feature: u8, arity: u8 },

    #[error("instance is labeled {} but the function evaluates to {}", *stated as u8, *actual as u8)]
    ClassMismatch { stated: bool, actual: bool },

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("{0}")]
    Range(String),

    #[error("out of scale: {0}")]
    Scale(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
