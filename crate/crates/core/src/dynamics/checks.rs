use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{exact_period, PeriodicPointRecord};
use crate::arith::{factor, pow_u, BigRat};
use crate::error::Result;
use crate::iterates::critical_terms;

/// Result of one structural check.
///
/// `Vacuous` means the statement holds for lack of anything to test (no
/// qualifying primes, or `c1 = 0` where divisibility by zero is meaningless).
/// `NotApplicable` means the statement is only claimed for period `n ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    // Declaration order is the aggregation priority.
    Fail,
    Pass,
    Vacuous,
    NotApplicable,
}

impl CheckOutcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == CheckOutcome::Fail
    }
}

pub type Checks = BTreeMap<String, CheckOutcome>;

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

/// `(a^k - b^k)/(a - b) mod p`, also when `p | a - b`.
fn ratio_mod(a: &BigInt, b: &BigInt, k: &BigInt, p: &BigInt) -> BigInt {
    let (a, b) = (a.mod_floor(p), b.mod_floor(p));
    if a == b {
        // The quotient is Σ a^i b^{k-1-i} ≡ k·a^{k-1}.
        return (k.mod_floor(p) * a.modpow(&(k - 1u32), p)).mod_floor(p);
    }
    let diff = (&a - &b).mod_floor(p);
    let top = (a.modpow(k, p) - b.modpow(k, p)).mod_floor(p);
    // p is prime and does not divide diff, so invert by Fermat.
    let inv = diff.modpow(&(p - 2u32), p);
    (top * inv).mod_floor(p)
}

/// Evaluates the structural statements that every cycle must satisfy.
pub fn structural_checks(rec: &PeriodicPointRecord, d: u32, c: &BigRat) -> Result<Checks> {
    use CheckOutcome::*;
    let (c1, c2) = (c.numer(), c.denom());
    let n = rec.n;
    let u2 = &rec.u2;
    let nums = &rec.u1_list;
    let mut out = Checks::new();

    out.insert(
        "denominator_is_u2_pow_d".into(),
        CheckOutcome::from_bool(pow_u(u2, d as u64) == *c2),
    );
    out.insert(
        "common_denominator".into(),
        CheckOutcome::from_bool(rec.orbit.iter().all(|u| u.denom() == u2)),
    );
    out.insert(
        "exact_period".into(),
        CheckOutcome::from_bool(
            rec.orbit.len() == n as usize
                && rec.orbit.iter().all(|u| exact_period(d, c, u, n) == Some(n)),
        ),
    );
    out.insert(
        "integral_for_integer_c".into(),
        if c2.is_one() {
            CheckOutcome::from_bool(rec.orbit.iter().all(BigRat::is_integer))
        } else {
            NotApplicable
        },
    );

    let f0 = critical_terms(d, c1, c2, n)?.pop().unwrap();
    out.insert(
        "numerators_exactly_divide_f0".into(),
        if f0.is_zero() {
            Vacuous
        } else {
            CheckOutcome::from_bool(nums.iter().all(|u1| {
                !u1.is_zero() && divides(u1, &f0) && (&f0 / u1).gcd(u1).is_one()
            }))
        },
    );

    let lemma = |f: &dyn Fn() -> CheckOutcome| if n < 2 { NotApplicable } else { f() };
    out.insert(
        "numerators_coprime_to_c1".into(),
        lemma(&|| {
            if c1.is_zero() {
                Vacuous
            } else {
                CheckOutcome::from_bool(nums.iter().all(|u1| u1.gcd(c1).is_one()))
            }
        }),
    );

    let m = pow_u(&BigInt::from(d), n as u64) - 1u32;
    out.insert(
        "c1_divides_power_difference".into(),
        lemma(&|| {
            if c1.is_zero() {
                return Vacuous;
            }
            let modulus = c1.abs();
            CheckOutcome::from_bool(nums.iter().all(|u1| {
                (u1.mod_floor(&modulus).modpow(&m, &modulus) - u2.mod_floor(&modulus).modpow(&m, &modulus))
                    .mod_floor(&modulus)
                    .is_zero()
            }))
        }),
    );

    let pairs: Vec<(&BigInt, &BigInt)> = nums
        .iter()
        .enumerate()
        .flat_map(|(i, a)| nums[i + 1..].iter().map(move |b| (a, b)))
        .collect();
    out.insert(
        "pairwise_coprime_numerators".into(),
        lemma(&|| CheckOutcome::from_bool(pairs.iter().all(|(a, b)| a.gcd(b).is_one()))),
    );

    let primes: Vec<BigInt> = if n >= 2 && !c1.is_zero() {
        factor(c1)
            .factors
            .into_iter()
            .map(|(p, _)| p)
            .filter(|p| p.gcd(&m).is_one())
            .collect()
    } else {
        Vec::new()
    };
    let ratio_check = |f: &dyn Fn(&BigInt, &BigInt, &BigInt) -> bool| {
        lemma(&|| {
            if primes.is_empty() || pairs.is_empty() {
                Vacuous
            } else {
                CheckOutcome::from_bool(
                    primes
                        .iter()
                        .all(|p| pairs.iter().all(|(a, b)| f(p, a, b))),
                )
            }
        })
    };
    out.insert(
        "ratio_prime_avoids_difference".into(),
        ratio_check(&|p, a, b| !divides(p, &(a - b))),
    );
    out.insert(
        "ratio_prime_divides_quotient".into(),
        ratio_check(&|p, a, b| ratio_mod(a, b, &m, p).is_zero()),
    );
    Ok(out)
}

/// Combines per-cycle checks: any failure fails, then any pass passes.
pub fn aggregate_checks<'a>(all: impl Iterator<Item = &'a Checks>) -> Checks {
    let mut out = Checks::new();
    for checks in all {
        for (name, &outcome) in checks {
            out.entry(name.clone())
                .and_modify(|cur: &mut CheckOutcome| *cur = (*cur).min(outcome))
                .or_insert(outcome);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::find_periodic;

    fn r(s: &str) -> BigRat {
        s.parse().unwrap()
    }

    fn checks_of(c: &str, n: u32) -> Vec<Checks> {
        find_periodic(2, &r(c), n)
            .unwrap()
            .into_iter()
            .map(|rec| rec.checks)
            .collect()
    }

    #[test]
    fn three_cycle_passes_everything() {
        let all = checks_of("-29/16", 3);
        assert_eq!(all.len(), 1);
        for (name, outcome) in &all[0] {
            let expected = if name == "integral_for_integer_c" {
                CheckOutcome::NotApplicable
            } else {
                CheckOutcome::Pass
            };
            assert_eq!(*outcome, expected, "{name}");
        }
    }

    #[test]
    fn degenerate_cases() {
        for checks in checks_of("0", 1) {
            assert_eq!(checks["numerators_exactly_divide_f0"], CheckOutcome::Vacuous);
            assert_eq!(checks["numerators_coprime_to_c1"], CheckOutcome::NotApplicable);
            assert!(checks.values().all(|o| !o.is_fail()));
        }
        let two_cycle = &checks_of("-1", 2)[0];
        assert_eq!(two_cycle["pairwise_coprime_numerators"], CheckOutcome::Pass);
        assert_eq!(two_cycle["numerators_coprime_to_c1"], CheckOutcome::Pass);
        assert_eq!(two_cycle["ratio_prime_avoids_difference"], CheckOutcome::Vacuous);
        assert!(two_cycle.values().all(|o| !o.is_fail()));
    }

    #[test]
    fn fixed_points_are_outside_lemma_scope() {
        // 2 is a fixed point of x^2 - 2 and shares the prime 2 with c1.
        for checks in checks_of("-2", 1) {
            assert_eq!(checks["numerators_coprime_to_c1"], CheckOutcome::NotApplicable);
            assert!(checks.values().all(|o| !o.is_fail()));
        }
    }

    #[test]
    fn ratio_mod_matches_direct_quotient() {
        let b = |v: i64| BigInt::from(v);
        for (a, bb, k, p) in [(-1i64, 4i64, 63i64, 29i64), (5, -7, 7, 3), (8, 3, 6, 5), (7, 2, 4, 5)] {
            let direct = (pow_u(&b(a), k as u64) - pow_u(&b(bb), k as u64)) / (b(a) - b(bb));
            assert_eq!(ratio_mod(&b(a), &b(bb), &b(k), &b(p)), direct.mod_floor(&b(p)));
        }
    }

    #[test]
    fn aggregation_prefers_failure() {
        let mut a = Checks::new();
        a.insert("x".into(), CheckOutcome::Pass);
        let mut b = Checks::new();
        b.insert("x".into(), CheckOutcome::Fail);
        assert_eq!(aggregate_checks([&a, &b].into_iter())["x"], CheckOutcome::Fail);
        let mut v = Checks::new();
        v.insert("x".into(), CheckOutcome::Vacuous);
        assert_eq!(aggregate_checks([&v, &a].into_iter())["x"], CheckOutcome::Pass);
    }
}
