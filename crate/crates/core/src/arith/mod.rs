//! Exact integer and rational arithmetic: canonical rationals, valuations,
//! primality, factorization, exact divisors and integer roots.

mod factor;
mod prime;
mod rational;
mod roots;
pub mod serde_big;

pub use factor::{
    all_factors_prime, exact_divisors, factor, factor_i64, factor_with, FactorBudget,
    Factorization,
};
pub use prime::{is_prime, is_prime_u64, primes_up_to, small_primes, DETERMINISTIC_LIMIT};
pub use rational::{normalize_rational, valuation, BigRat};
pub use roots::{is_pth_power_rational, perfect_root};

pub(crate) use prime::pow_mod;
pub(crate) use rational::int_valuation;
pub(crate) use roots::pow_u;
