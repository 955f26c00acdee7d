use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("index out of range: ({n}, {k}) requires 0 <= k <= n")]
    IndexOutOfRange { n: usize, k: usize },
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("lambda must satisfy lambda > -1 and lambda != 0, got {0}")]
    InvalidLambda(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial term has L-exponent 0 and cannot be divided by L")]
    NotDivisibleByL,
}
