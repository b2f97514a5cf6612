use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Zero is stored as `0/1`. The numerator and denominator play the roles of
/// `c1/c2` for a parameter and `u1/u2` for a point throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BigRat(BigRational);

impl BigRat {
    /// Builds `a/b` in canonical form.
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // Ratio::new reduces and moves the sign onto the numerator.
        Ok(BigRat(BigRational::new(a, b)))
    }

    pub fn from_integer(a: BigInt) -> Self {
        BigRat(BigRational::from_integer(a))
    }

    pub fn zero() -> Self {
        BigRat(BigRational::zero())
    }

    pub fn one() -> Self {
        BigRat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Height `max(|num|, den)`.
    pub fn height(&self) -> BigInt {
        let a = self.numer().abs();
        let b = self.denom().clone();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        BigRat(num_traits::pow::Pow::pow(&self.0, e))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for BigRat {
    fn from(r: BigRational) -> Self {
        BigRat(r)
    }
}

impl From<BigInt> for BigRat {
    fn from(a: BigInt) -> Self {
        BigRat::from_integer(a)
    }
}

impl From<i64> for BigRat {
    fn from(a: i64) -> Self {
        BigRat::from_integer(BigInt::from(a))
    }
}

/// [`BigRat::new`] on machine integers.
pub fn normalize_rational(a: i64, b: i64) -> Result<BigRat> {
    BigRat::new(BigInt::from(a), BigInt::from(b))
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigRat {
            type Output = BigRat;
            fn $m(self, rhs: BigRat) -> BigRat {
                BigRat(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a BigRat> for &'a BigRat {
            type Output = BigRat;
            fn $m(self, rhs: &'a BigRat) -> BigRat {
                BigRat((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        BigRat(-self.0)
    }
}

impl Ord for BigRat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for BigRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BigRat {
    type Err = Error;

    /// Accepts `a` or `a/b` with decimal integers; a leading `-` is allowed on
    /// either part. The Unicode minus sign is tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().replace('\u{2212}', "-");
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(s.to_string()));
            }
            t.parse::<BigInt>().map_err(|_| Error::Parse(s.to_string()))
        };
        match cleaned.split_once('/') {
            None => Ok(BigRat::from_integer(parse_int(&cleaned)?)),
            Some((a, b)) => BigRat::new(parse_int(a)?, parse_int(b)?),
        }
    }
}

impl Serialize for BigRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BigRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent of the prime `p` in the nonzero integer `n`.
pub(crate) fn int_valuation(p: &BigInt, n: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `ν_p(x) = ν_p(num) − ν_p(den)`.
pub fn valuation(p: &BigInt, x: &BigRat) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if !super::prime::is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(int_valuation(p, x.numer()) as i64 - int_valuation(p, x.denom()) as i64)
}
