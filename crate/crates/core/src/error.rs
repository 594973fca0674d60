use thiserror::Error;

/// Errors raised by field, vector, angle and code operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeP(u32),
    #[error("field of order {p}^{m} exceeds the 65536-element cap")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of F_{q}")]
    InvalidElement { value: u64, q: u32 },
    #[error("vectors must have at least one coordinate")]
    EmptyVector,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("the zero vector has no direction")]
    ZeroVector,
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("generator matrix has no rows")]
    EmptyGenerator,
    #[error("Reed-Solomon length {n} exceeds the field size {q}")]
    TooManyPoints { n: usize, q: u32 },
    #[error("dimension k={k} must satisfy 1 <= k <= n={n}")]
    InvalidDimension { n: usize, k: usize },
    #[error("evaluation points are not distinct")]
    DuplicatePoints,
    #[error("enumerating {q}^{k} codewords exceeds the 2^20 guard")]
    EnumerationTooLarge { q: u32, k: usize },
    #[error("suite over {count} nonzero vectors exceeds the limit of {limit}")]
    SuiteTooLarge { count: u64, limit: u64 },
    #[error("{count} projective codewords lie within the unique-decoding radius")]
    UniquenessViolated { count: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
