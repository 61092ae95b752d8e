use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rejected modulus {modulus:#b} for extension degree {degree}: {reason}")]
    RejectedModulus {
        degree: u32,
        modulus: u32,
        reason: &'static str,
    },
    #[error("extension degree {0} outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial is a monomial; striction needs at least two terms")]
    MonomialInput,
    #[error("field F_2^{field_degree} is incompatible: {detail}")]
    IncompatibleField { field_degree: u32, detail: String },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("operator is not ultimately periodic with a cyclic part: {0}")]
    NotPeriodic(String),
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invariant factor {factor} does not match (X^{q}+1)^(2^t)")]
    UnexpectedFactorShape { factor: String, q: u64 },
    #[error("weight is not an algebra morphism: w(e{i} e{j}) != w(e{i}) w(e{j})")]
    NotAMorphism { i: usize, j: usize },
    #[error("weight is identically zero")]
    ZeroWeight,
    #[error("evolution operator restricted to ker w is not nilpotent")]
    KernelNotNilpotent,
    #[error("ring size {0} too small (need at least 3)")]
    SizeTooSmall(usize),
    #[error("algebra has nonzero off-diagonal products in the given basis")]
    NotEvolutionAlgebra,
    #[error("computation exceeds supported size: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
