use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid group table ({axiom}): {detail}")]
    InvalidGroup { axiom: &'static str, detail: String },

    #[error("unknown group `{name}`; bundled groups: {bundled}")]
    UnknownGroup { name: String, bundled: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("algebra has no augmentation")]
    NoAugmentation,

    #[error("degree {degree} is beyond the trusted bound {trusted_to}")]
    UntrustedDegree { degree: i64, trusted_to: i64 },

    #[error("resource cap {cap} exceeded at degree {degree} (last complete degree {reached})")]
    ResourceCap { cap: usize, degree: i64, reached: i64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
