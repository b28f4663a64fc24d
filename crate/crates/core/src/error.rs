use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is outside the supported range [2, {max}]", max = crate::exact_arith::MAX_SUPPORTED)]
    OutOfRange(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("p = 2 is not supported")]
    UnsupportedPrime,
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: i64, b: i64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("operands carry different primes ({0} and {1})")]
    MixedPrimes(u64, u64),
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
