//! Exact arithmetic dynamics of `f(x) = x^d + c` over the rationals.
//!
//! - [`arith`]: canonical rationals, valuations, factorization.
//! - [`iterates`]: coefficient tables of `f^n`, their cleared integer form,
//!   and the critical orbit `F_0^k = c2^{d^{k-1}} f^k(0)`.
//! - [`newton`]: Newton polygons, Eisenstein–Dumas, stability certificates
//!   and an independent irreducibility oracle.
//! - [`dynamics`]: complete search for rational points of exact period `n`,
//!   structural checks on every cycle found, and period-exclusion filters.
//! - [`primitive`]: primitive prime divisors of the critical orbit.
//! - [`census`]: height-bounded counts and periodic-point sweeps.
//!
//! Everything is exact; the only floating-point values are the predicted
//! asymptotics reported next to exact counts in [`census`].

pub mod arith;
pub mod census;
pub mod dynamics;
mod error;
pub mod iterates;
pub mod newton;
pub mod primitive;

pub use arith::{BigRat, Factorization};
pub use error::{Error, Result};
pub use num_bigint::BigInt;
