use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent overflow in q-polynomial arithmetic")]
    ExponentOverflow,
    #[error("polynomial is not divisible by (q - 1)")]
    NotDivisible,
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("multi-index {index:?} outside bounds {bounds:?}")]
    OutOfBounds { index: Vec<u32>, bounds: Vec<u32> },
    #[error("series has a nonzero constant term")]
    NonZeroConstantTerm,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operands live in different rings (p = {0} vs {1}, or arity mismatch)")]
    RingMismatch(u32, u32),
    #[error("unsupported prime {0}; supported primes are 2, 3, 5")]
    UnsupportedPrime(u32),
    #[error("oracle self-check failed: {0}")]
    OracleInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
