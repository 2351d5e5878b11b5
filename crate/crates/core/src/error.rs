use thiserror::Error;

/// Errors raised by field construction, spectrum computation and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field degree {0} is outside the supported range 2..=24")]
    InvalidDegree(u32),

    #[error("modulus {modulus:#x} does not have degree {degree}")]
    WrongModulusDegree { degree: u32, modulus: u64 },

    #[error("modulus {0:#x} is reducible over GF(2)")]
    Reducible(u64),

    #[error("{l} does not divide the field degree {k}")]
    NotADivisor { l: u32, k: u32 },

    #[error("{m} does not divide the multiplicative group order {order}")]
    NotAGroupDivisor { m: u64, order: u64 },

    #[error("exponent {d} is not a permutation exponent of GF(2^{k})")]
    NotPermutation { k: u32, d: u64 },

    #[error("table is not a bijection on GF(2^{k}): {reason}")]
    NotBijective { k: u32, reason: String },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("domain error: {0}")]
    Domain(String),

    /// An invariant that must hold for a correct field model was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("refusing to run: {reason} (estimated {estimate})")]
    ResourceGate { reason: String, estimate: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
