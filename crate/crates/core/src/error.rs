use thiserror::Error;

/// Errors raised by the algebra, code, and search layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{m} exceeds the supported bound 2^16")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("operands belong to different quotient rings")]
    RingMismatch,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("operation requires a non-constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("invalid element index {index} for a field of size {q}")]
    InvalidElement { index: u64, q: u32 },
    #[error("modulus must be monic of degree at least {min}, got degree {got:?}")]
    BadModulus { min: usize, got: Option<usize> },
    #[error("index t must be at least 2, got {0}")]
    BadIndex(usize),
    #[error("expected {expected} generator residues, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("column set has {got} entries, code dimension is {expected}")]
    WrongSetSize { expected: usize, got: usize },
    #[error("column index {0} out of range")]
    ColumnOutOfRange(usize),
    #[error("generator matrix does not have full row rank")]
    RankDeficient,
    #[error("work estimate {needed} exceeds the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("value {0} lies outside the entropy domain")]
    EntropyDomain(f64),
    #[error("target {0} has no solution below the entropy maximum")]
    UnreachableTarget(f64),
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("constituent fields do not all have the same degree")]
    UnequalDegrees,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("code is not t-CIS")]
    NotCis,
    #[error("field characteristic must be 2, got {0}")]
    NotCharacteristicTwo(u32),
    #[error("basis is not linearly independent over F2")]
    DependentBasis,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
