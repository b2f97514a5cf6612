//! Integer factorization: trial division by the static prime table, then
//! Pollard–Brent rho on whatever cofactor is left.
//!
//! A factorization that runs out of budget is returned with
//! `complete = false` and the unsplit composite kept in `cofactor`; it is
//! never silently reported as prime.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::prime::{is_prime, is_prime_u64, mul_mod, small_primes, SMALL_PRIME_BOUND};
use super::serde_big;
use crate::error::{Error, Result};

/// Effort limits for [`factor_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial-divide by every prime up to this bound (capped at the table size).
    pub trial_bound: u32,
    /// Total rho iterations allowed per composite cofactor, across restarts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: SMALL_PRIME_BOUND,
            rho_iterations: 50_000_000,
        }
    }
}

/// Sign and prime-power decomposition of an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// `+1`, `-1`, or `0` for the input zero.
    pub sign: i8,
    /// Strictly increasing primes with positive exponents.
    #[serde(with = "serde_big::prime_powers")]
    pub factors: Vec<(BigInt, u32)>,
    pub complete: bool,
    /// Composite part left unsplit when `complete` is false; `1` otherwise.
    #[serde(with = "serde_big::int")]
    pub cofactor: BigInt,
}

impl Factorization {
    /// Reassembles the integer, including any unfactored cofactor.
    pub fn value(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.sign < 0 {
            -acc
        } else {
            acc
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Exponent of `p`, `0` when absent.
    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// `ω(n)`, the number of distinct primes.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteFactorization {
                value: self.value(),
                cofactor: self.cofactor.clone(),
            })
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => return write!(f, "0"),
            s if s < 0 => write!(f, "-1")?,
            _ => write!(f, "1")?,
        }
        for (p, e) in &self.factors {
            if *e == 1 {
                write!(f, " * {p}")?;
            } else {
                write!(f, " * {p}^{e}")?;
            }
        }
        if !self.complete {
            write!(f, " * [{}]", self.cofactor)?;
        }
        Ok(())
    }
}

/// Factors `n` with the default budget.
pub fn factor(n: &BigInt) -> Factorization {
    factor_with(n, &FactorBudget::default())
}

pub fn factor_i64(n: i64) -> Factorization {
    factor(&BigInt::from(n))
}

pub fn factor_with(n: &BigInt, budget: &FactorBudget) -> Factorization {
    let sign = match n.sign() {
        Sign::NoSign => {
            return Factorization {
                sign: 0,
                factors: Vec::new(),
                complete: true,
                cofactor: BigInt::one(),
            }
        }
        Sign::Minus => -1,
        Sign::Plus => 1,
    };
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.magnitude().clone();

    let bound = budget.trial_bound.min(SMALL_PRIME_BOUND);
    let mut trial_done_to = 1u64;
    if let Some(mut small) = rest.to_u64() {
        for &p in small_primes().iter().take_while(|&&p| p <= bound) {
            let p = p as u64;
            if p * p > small {
                break;
            }
            trial_done_to = p;
            if small % p == 0 {
                let mut e = 0;
                while small % p == 0 {
                    small /= p;
                    e += 1;
                }
                primes.push((BigUint::from(p), e));
            }
        }
        rest = BigUint::from(small);
    } else {
        for &p in small_primes().iter().take_while(|&&p| p <= bound) {
            if let Some(small) = rest.to_u64() {
                if (p as u64) * (p as u64) > small {
                    break;
                }
            }
            trial_done_to = p as u64;
            if (&rest % p).is_zero() {
                let mut e = 0;
                while (&rest % p).is_zero() {
                    rest /= p;
                    e += 1;
                }
                primes.push((BigUint::from(p), e));
            }
        }
    }

    let mut leftover = BigUint::one();
    if !rest.is_one() {
        let below_square = BigUint::from(trial_done_to + 1).pow(2);
        if rest < below_square {
            // No factor ≤ sqrt(rest) survived trial division.
            primes.push((rest, 1));
        } else {
            let mut stack = vec![rest];
            let mut budget_left = budget.rho_iterations;
            while let Some(m) = stack.pop() {
                if m.is_one() {
                    continue;
                }
                if is_prime(&BigInt::from(m.clone())) {
                    primes.push((m, 1));
                    continue;
                }
                if let Some((root, k)) = perfect_power(&m) {
                    for _ in 0..k {
                        stack.push(root.clone());
                    }
                    continue;
                }
                match split(&m, &mut budget_left) {
                    Some(d) => {
                        let other = &m / &d;
                        stack.push(d);
                        stack.push(other);
                    }
                    None => leftover *= m,
                }
            }
        }
    }

    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in primes {
        let p = BigInt::from(p);
        match factors.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => factors.push((p, e)),
        }
    }
    Factorization {
        sign,
        factors,
        complete: leftover.is_one(),
        cofactor: BigInt::from(leftover),
    }
}

/// Largest `k ≥ 2` with `m = r^k`, if any.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits() as u32;
    for k in (2..=bits).rev() {
        let r = m.nth_root(k);
        if r > BigUint::one() && num_traits::pow(r.clone(), k as usize) == *m {
            return Some((r, k));
        }
    }
    None
}

/// Finds a nontrivial factor of the odd composite `m`, spending at most
/// `budget` rho iterations.
fn split(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if m.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let found = match m.to_u64() {
            Some(small) => rho_u64(small, c, budget).map(BigUint::from),
            None => rho_big(m, &BigUint::from(c), budget),
        };
        if let Some(d) = found {
            return Some(d);
        }
    }
    unreachable!()
}

const BATCH: u64 = 128;

fn rho_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    let f = |y: u64| (mul_mod(y, y, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64 % n, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            *budget = budget.saturating_sub(steps);
            g = q.gcd(&n);
            k += steps;
        }
        r *= 2;
        if *budget == 0 && g == 1 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let f = |y: &BigUint| (y * y + c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            *budget = budget.saturating_sub(steps);
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
        if *budget == 0 && g.is_one() {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// All `v = ± Π_{p∈S} p^{ν_p(n)}` over subsets `S` of the primes of `n`,
/// i.e. the divisors `v` with `v ‖ n`. Sorted ascending.
pub fn exact_divisors(f: &Factorization) -> Result<Vec<BigInt>> {
    f.require_complete()?;
    if f.is_zero() {
        return Err(Error::InvalidParameter(
            "exact divisors of zero are undefined".into(),
        ));
    }
    let mut positive = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let pe = num_traits::pow(p.clone(), *e as usize);
        let extended: Vec<BigInt> = positive.iter().map(|v| v * &pe).collect();
        positive.extend(extended);
    }
    let mut all: Vec<BigInt> = positive
        .iter()
        .flat_map(|v| [v.clone(), -v.clone()])
        .collect();
    all.sort();
    Ok(all)
}

/// Checks `p` is prime with an independent method; used by callers that
/// accept externally supplied factorizations.
pub fn all_factors_prime(f: &Factorization) -> bool {
    f.factors.iter().all(|(p, e)| {
        *e > 0
            && match p.to_u64() {
                Some(small) => is_prime_u64(small),
                None => is_prime(p),
            }
    }) && f.factors.windows(2).all(|w| w[0].0 < w[1].0)
        && !f.cofactor.is_negative()
}
