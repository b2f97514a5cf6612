//! Primality testing and the small-prime table.
//!
//! Inputs below `3.317·10^24` are decided exactly by strong-probable-prime
//! tests to the first thirteen prime bases. Larger inputs additionally run
//! [`EXTRA_ROUNDS`] rounds with bases drawn from a generator seeded by the
//! input itself, so the answer is reproducible; a composite survives with
//! probability below `4^-(13 + EXTRA_ROUNDS)`.

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic witness set for all `n < 3_317_044_064_679_887_385_961_981`.
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Upper limit for which [`WITNESSES`] give a proof.
pub const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Randomized rounds run above [`DETERMINISTIC_LIMIT`].
pub const EXTRA_ROUNDS: usize = 24;

/// Bound of the static prime table.
pub const SMALL_PRIME_BOUND: u32 = 1_000_000;

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| primes_up_to(SMALL_PRIME_BOUND));

/// All primes `≤ SMALL_PRIME_BOUND`, ascending.
pub fn small_primes() -> &'static [u32] {
    &SMALL_PRIMES
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u32) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn sprp_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Exact primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // The first twelve bases already suffice below 2^64.
    WITNESSES.iter().all(|&a| sprp_u64(n, a))
}

fn sprp_big(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality of `|n|`'s sign-aware value: negative numbers, 0 and 1 are not prime.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    if !WITNESSES
        .iter()
        .all(|&a| sprp_big(n, &n_minus_1, &d, s, &BigUint::from(a)))
    {
        return false;
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_LIMIT) {
        return true;
    }
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    (0..EXTRA_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        sprp_big(n, &n_minus_1, &d, s, &a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_inputs() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes.
        let m89 = (BigInt::one() << 89u32) - 1;
        let m127 = (BigInt::one() << 127u32) - 1;
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        // 2^101 - 1 = 7432339208719 * 341117531003194129
        let m101 = (BigInt::one() << 101u32) - 1;
        assert!(!is_prime(&m101));
        // Product of two 13-digit primes.
        let semi = BigInt::from(1_000_000_000_039u64) * BigInt::from(1_000_000_000_061u64);
        assert!(!is_prime(&semi));
        assert!(!is_prime(&BigInt::from(-7)));
    }

    #[test]
    fn sieve_table() {
        let t = small_primes();
        assert_eq!(t.len(), 78_498);
        assert_eq!(t[..5], [2, 3, 5, 7, 11]);
        assert_eq!(*t.last().unwrap(), 999_983);
    }
}
