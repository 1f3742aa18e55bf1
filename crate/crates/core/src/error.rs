use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds the supported range (p <= 2^31 - 1)")]
    FieldTooLarge(u64),
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("function space of {required} cells exceeds the cap of {cap}")]
    SizeLimit { required: u128, cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("not a permutation (det M = {det})")]
    NotPermutation { det: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("undefined at a = {0}")]
    UndefinedAt(u64),
    #[error("map is not a bijection")]
    NotBijective,
    #[error("determinant vanishes identically in the parameter")]
    GenericallySingular,
}

pub type Result<T> = std::result::Result<T, Error>;
