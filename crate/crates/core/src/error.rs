use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("vector has non-integral coordinates")]
    NotIntegral,

    #[error("zero vector has no evaluation functional")]
    ZeroVector,

    #[error("form is not positive definite")]
    NotPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("degenerate cone: generators span rank {rank} of {dim}")]
    DegenerateCone { rank: usize, dim: usize },

    #[error("minimal vector data inconsistent with form: {0}")]
    InconsistentMinimalData(String),

    #[error("seed construction failed: {0}")]
    Seed(String),

    #[error("form is not perfect (rank {rank} of {required})")]
    NotPerfect { rank: usize, required: usize },

    #[error("neighbor walk failed: {0}")]
    Walk(String),

    #[error("enumeration truncated after reaching the class cap of {cap}")]
    Truncated { cap: usize },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
