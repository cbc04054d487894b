use alloc::string::String;

/// Failures raised by the algebra kernel and the pipeline built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("assignment has {got} values but the ring has {expected} variables")]
    PartialAssignment { expected: usize, got: usize },
    #[error("a coefficient denominator vanishes modulo {0}")]
    BadPrime(u64),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("no good prime found at or below {0}")]
    NoGoodPrime(u64),
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("monomial exponent overflow")]
    ExponentOverflow,
    #[error("term order mismatch: {0}")]
    OrderMismatch(String),
    #[error("empty variable subset")]
    EmptyVariableSet,
    #[error("generator list is empty")]
    NoGenerators,
    #[error("enumeration of {points} points exceeds the guard of {limit}")]
    GuardExceeded { points: u128, limit: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;
