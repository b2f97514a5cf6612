use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::rational::BigRat;

/// `r ≥ 1` with `r^k = n`, if it exists.
pub fn perfect_root(n: &BigInt, k: u32) -> Option<BigInt> {
    assert!(k >= 2, "root index must be at least 2");
    if !n.is_positive() {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// True iff `x = y^p` for some rational `y`.
pub fn is_pth_power_rational(x: &BigRat, p: u32) -> bool {
    assert!(p >= 2, "power must be at least 2");
    if x.is_zero() {
        return true;
    }
    let num = x.numer();
    if num.is_negative() {
        if p % 2 == 0 {
            return false;
        }
        // Odd powers carry the sign through.
        return perfect_root(&-num, p).is_some() && perfect_root(x.denom(), p).is_some();
    }
    perfect_root(num, p).is_some() && perfect_root(x.denom(), p).is_some()
}

/// `b^e` for a machine exponent.
pub(crate) fn pow_u(b: &BigInt, e: u64) -> BigInt {
    if e == 0 {
        return BigInt::one();
    }
    num_traits::pow(b.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRat {
        s.parse().unwrap()
    }

    #[test]
    fn root_examples() {
        assert_eq!(perfect_root(&BigInt::from(16), 2), Some(BigInt::from(4)));
        assert_eq!(perfect_root(&BigInt::from(27), 3), Some(BigInt::from(3)));
        assert_eq!(perfect_root(&BigInt::from(12), 2), None);
        assert_eq!(perfect_root(&BigInt::from(1), 5), Some(BigInt::from(1)));
        let big = num_traits::pow(BigInt::from(123_456_789_013u64), 7);
        assert_eq!(perfect_root(&big, 7), Some(BigInt::from(123_456_789_013u64)));
        assert_eq!(perfect_root(&(big + 1), 7), None);
    }

    #[test]
    fn rational_powers() {
        assert!(!is_pth_power_rational(&r("4/3"), 2));
        assert!(is_pth_power_rational(&r("-8/27"), 3));
        assert!(is_pth_power_rational(&r("9/16"), 2));
        assert!(!is_pth_power_rational(&r("-9/16"), 2));
        assert!(is_pth_power_rational(&r("0"), 2));
    }
}
