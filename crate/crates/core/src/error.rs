use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{k}) is larger than the supported maximum of 2^30 elements")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {k} over GF({p})")]
    ReducibleModulus { p: u32, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    ContextMismatch,
    #[error("{sub} does not divide the extension degree {degree}")]
    NonDividingDegree { sub: u32, degree: u32 },
    #[error("GF({p}^{k}) has no subfield of order {needed}")]
    FieldTooSmall { p: u32, k: u32, needed: u64 },
    #[error("element does not lie in the required subfield")]
    NotInSubfield,
    #[error("modulus table line {line}: {reason}")]
    ModulusTable { line: usize, reason: String },
    #[error("polynomial involves the pencil parameter but no value was supplied")]
    MissingParameter,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("parse error at byte {pos}: {reason}")]
    Parse { pos: usize, reason: String },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point does not lie on both the curve and the line")]
    PointNotOnBoth,
    #[error("the line is a component of the curve")]
    LineIsComponent,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u64, found: u64 },
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceExceeded { size: u64, cap: u64 },
    #[error("space of dimension {dim} exceeds the cap of {cap}")]
    CapExceeded { dim: usize, cap: usize },
    #[error("unknown identifier `{0}`")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
