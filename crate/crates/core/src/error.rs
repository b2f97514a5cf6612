use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: bad input (the caller asked for
/// something undefined) and incompleteness (the computation is well defined
/// but exceeded a configured budget). [`Error::is_incomplete`] tells them
/// apart; the CLI maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("valuation of zero is infinite")]
    ValuationOfZero,

    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("numerator {c1} and denominator {c2} are not coprime")]
    NotCoprime { c1: BigInt, c2: BigInt },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),

    #[error("factorization of {value} is incomplete (unfactored cofactor {cofactor})")]
    IncompleteFactorization { value: BigInt, cofactor: BigInt },

    #[error("size guard: {slots} coefficient slots requested, limit is {limit}")]
    SizeGuard { slots: u128, limit: usize },

    #[error("degree {degree} exceeds the irreducibility oracle cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("census budget: estimated volume {estimate} exceeds cap {cap}")]
    CensusBudget { estimate: u128, cap: u128 },

    #[error("{0}")]
    NotPeriodic(String),
}

impl Error {
    /// True for errors caused by an exhausted budget or guard rather than by
    /// invalid input.
    pub fn is_incomplete(&self) -> bool {
        matches!(
            self,
            Error::IncompleteFactorization { .. }
                | Error::SizeGuard { .. }
                | Error::DegreeCap { .. }
                | Error::CensusBudget { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
