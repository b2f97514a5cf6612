//! Rational periodic points of `f(x) = x^d + c1/c2`.
//!
//! A periodic point `u1/u2` forces `c2 = u2^d`, and on the cycle the map is
//! conjugate to the integer map `x ↦ (x^d + c1)/u2^{d-1}` acting on
//! numerators. The search enumerates a finite candidate set of numerators
//! and confirms each one on that integer map.

mod checks;
mod exclusion;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_divisors, factor_with, pow_u, serde_big, BigRat, FactorBudget};
use crate::error::{Error, Result};
use crate::iterates::{apply, check_degree, critical_terms};

pub use checks::{aggregate_checks, structural_checks, CheckOutcome, Checks};
pub use exclusion::{exclusion_filter, exclusion_filter_with, ExclusionOutcome, ExclusionVerdict, TraceEntry};

/// One cycle of exact period `n`, rotated so its smallest member leads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPointRecord {
    pub u: BigRat,
    pub n: u32,
    #[serde(with = "serde_big::int")]
    pub u2: BigInt,
    pub orbit: Vec<BigRat>,
    #[serde(with = "serde_big::int_vec")]
    pub u1_list: Vec<BigInt>,
    pub checks: Checks,
}

/// How candidate numerators are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    /// Exact divisors of `F_0^n`, narrowed by the coprimality and
    /// divisibility constraints on cycle numerators. Needs a complete
    /// factorization of `F_0^n`.
    Divisors,
    /// Every numerator inside the escape radius `|c|^{1/d} + 1`. Needs no
    /// factorization; cost grows with `u2·|c|^{1/d}`.
    Window,
    /// `Window` when it has at most [`SearchConfig::window_limit`]
    /// candidates, otherwise `Divisors`.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    pub budget: FactorBudget,
    pub window_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: SearchStrategy::Auto,
            budget: FactorBudget::default(),
            window_limit: 1 << 16,
        }
    }
}

impl SearchConfig {
    pub fn with_strategy(strategy: SearchStrategy) -> Self {
        SearchConfig {
            strategy,
            ..Self::default()
        }
    }
}

/// Everything `find_periodic` learned about one `(d, c, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicReport {
    pub c: BigRat,
    pub d: u32,
    pub n: u32,
    /// `c2^{1/d}`, absent when the gate rules out every period.
    #[serde(with = "serde_big::opt_int")]
    pub u2: Option<BigInt>,
    pub cycles: Vec<Vec<BigRat>>,
    pub checks: Checks,
    pub records: Vec<PeriodicPointRecord>,
}

/// `c2^{1/d}` if `c2` is a perfect `d`-th power; otherwise `x^d + c` has no
/// rational periodic points at all.
pub fn denominator_gate(d: u32, c: &BigRat) -> Option<BigInt> {
    let c2 = c.denom();
    let r = c2.nth_root(d);
    (pow_u(&r, d as u64) == *c2).then_some(r)
}

/// Every `u` with `f(u)` periodic satisfies `|u| ≤ |c|^{1/d} + 1`; this
/// returns an integer bound `B` with `|u1| ≤ B` for numerators over `u2`.
pub fn escape_bound(d: u32, c: &BigRat, u2: &BigInt) -> BigInt {
    let abs_c_ceil = c.numer().abs().div_ceil(c.denom());
    let mut r = abs_c_ceil.nth_root(d);
    if pow_u(&r, d as u64) < abs_c_ceil {
        r += 1;
    }
    u2 * (r + 1)
}

/// `[u1, g(u1), ..., g^steps(u1)]` for `g(x) = (x^d + c1)/u2^{d-1}`.
pub fn conjugated_orbit(d: u32, c1: &BigInt, u2: &BigInt, u1: &BigInt, steps: usize) -> Result<Vec<BigInt>> {
    check_degree(d)?;
    if !u2.is_positive() {
        return Err(Error::InvalidParameter("u2 must be positive".into()));
    }
    let scale = pow_u(u2, d as u64 - 1);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(u1.clone());
    for _ in 0..steps {
        let x = out.last().unwrap();
        let (q, r) = (pow_u(x, d as u64) + c1).div_rem(&scale);
        if !r.is_zero() {
            return Err(Error::NotPeriodic(format!(
                "{x}/{u2} is not periodic: {u2}^{} does not divide {x}^{d} + {c1}",
                d - 1
            )));
        }
        out.push(q);
    }
    Ok(out)
}

/// Least `m ≤ n_cap` with `f^m(u) = u`.
pub fn exact_period(d: u32, c: &BigRat, u: &BigRat, n_cap: u32) -> Option<u32> {
    let mut x = u.clone();
    for m in 1..=n_cap {
        x = apply(d, c, &x);
        if &x == u {
            return Some(m);
        }
    }
    None
}

/// Integer map on numerators with an escape cutoff.
struct Conjugate<'a> {
    d: u32,
    c1: &'a BigInt,
    scale: BigInt,
    bound: &'a BigInt,
}

impl Conjugate<'_> {
    fn step(&self, x: &BigInt) -> Option<BigInt> {
        let (q, r) = (pow_u(x, self.d as u64) + self.c1).div_rem(&self.scale);
        (r.is_zero() && q.abs() <= *self.bound).then_some(q)
    }

    /// True when `x` returns to itself for the first time after exactly `n` steps.
    fn has_exact_period(&self, x0: &BigInt, n: u32) -> bool {
        let mut x = x0.clone();
        for m in 1..=n {
            match self.step(&x) {
                Some(next) => x = next,
                None => return false,
            }
            if &x == x0 {
                return m == n;
            }
        }
        false
    }
}

fn lemma_filters(u1: &BigInt, c1: &BigInt, u2: &BigInt, d: u32, n: u32) -> bool {
    if n < 2 {
        return true;
    }
    if !u1.gcd(c1).is_one() {
        return false;
    }
    let m = c1.abs();
    if m.is_one() {
        return true;
    }
    let e = pow_u(&BigInt::from(d), n as u64) - 1u32;
    let a = u1.mod_floor(&m).modpow(&e, &m);
    let b = u2.mod_floor(&m).modpow(&e, &m);
    a == b
}

/// Complete set of cycles of exact period `n`, one record per cycle.
pub fn find_periodic(d: u32, c: &BigRat, n: u32) -> Result<Vec<PeriodicPointRecord>> {
    find_periodic_with(d, c, n, &SearchConfig::default())
}

pub fn find_periodic_with(d: u32, c: &BigRat, n: u32, cfg: &SearchConfig) -> Result<Vec<PeriodicPointRecord>> {
    Ok(periodic_report_with(d, c, n, cfg)?.records)
}

pub fn periodic_report(d: u32, c: &BigRat, n: u32) -> Result<PeriodicReport> {
    periodic_report_with(d, c, n, &SearchConfig::default())
}

pub fn periodic_report_with(d: u32, c: &BigRat, n: u32, cfg: &SearchConfig) -> Result<PeriodicReport> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("period n must be ≥ 1".into()));
    }
    let empty = |u2| PeriodicReport {
        c: c.clone(),
        d,
        n,
        u2,
        cycles: Vec::new(),
        checks: Checks::new(),
        records: Vec::new(),
    };
    let Some(u2) = denominator_gate(d, c) else {
        return Ok(empty(None));
    };
    let (c1, c2) = (c.numer(), c.denom());
    let f0 = critical_terms(d, c1, c2, n)?.pop().unwrap();
    let bound = escape_bound(d, c, &u2);
    let window = 2 * &bound + 1u32;

    let use_window = f0.is_zero()
        || match cfg.strategy {
            SearchStrategy::Window => true,
            SearchStrategy::Divisors => false,
            SearchStrategy::Auto => window <= BigInt::from(cfg.window_limit),
        };
    let candidates: Vec<BigInt> = if use_window {
        // When F_0^n = 0 the point 0 is periodic and every integer divides
        // F_0^n, so divisors say nothing; the window is always small here
        // because then c2 = 1 and c is 0 or -1.
        let b = i64::try_from(&bound)
            .map_err(|_| Error::InvalidParameter(format!("search window {window} is too large")))?;
        (-b..=b)
            .map(BigInt::from)
            .filter(|u1| u1.gcd(&u2).is_one())
            .collect()
    } else {
        let fac = factor_with(&f0, &cfg.budget);
        exact_divisors(&fac)?
            .into_iter()
            .filter(|u1| u1.abs() <= bound && u1.gcd(&u2).is_one() && lemma_filters(u1, c1, &u2, d, n))
            .collect()
    };

    let map = Conjugate {
        d,
        c1,
        scale: pow_u(&u2, d as u64 - 1),
        bound: &bound,
    };
    let hits: BTreeSet<BigInt> = candidates
        .par_iter()
        .filter(|u1| map.has_exact_period(u1, n))
        .cloned()
        .collect();

    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for start in &hits {
        if seen.contains(start) {
            continue;
        }
        let mut cycle = vec![start.clone()];
        loop {
            let next = map.step(cycle.last().unwrap()).expect("verified cycle member");
            if &next == start {
                break;
            }
            cycle.push(next);
        }
        // `start` is the smallest unseen hit, and every member is a hit, so
        // the cycle already begins at its minimum.
        seen.extend(cycle.iter().cloned());
        let orbit: Vec<BigRat> = cycle
            .iter()
            .map(|u1| BigRat::new(u1.clone(), u2.clone()))
            .collect::<Result<_>>()?;
        let mut rec = PeriodicPointRecord {
            u: orbit[0].clone(),
            n,
            u2: u2.clone(),
            orbit,
            u1_list: cycle,
            checks: Checks::new(),
        };
        rec.checks = structural_checks(&rec, d, c)?;
        records.push(rec);
    }

    let mut report = empty(Some(u2));
    report.cycles = records.iter().map(|r| r.orbit.clone()).collect();
    report.checks = aggregate_checks(records.iter().map(|r| &r.checks));
    report.records = records;
    Ok(report)
}

/// Independent brute-force search used to validate [`find_periodic`]:
/// tries every `u1/u2` with `|u1| ≤ max(|F_0^n|, 1)` by plain rational
/// iteration in `i128`. Arithmetic overflow means the orbit left every
/// bounded region, so such a start is not periodic.
pub fn brute_force_periodic(d: u32, c: &BigRat, n: u32) -> Result<Vec<Vec<BigRat>>> {
    check_degree(d)?;
    let Some(u2) = denominator_gate(d, c) else {
        return Ok(Vec::new());
    };
    let f0 = critical_terms(d, c.numer(), c.denom(), n)?.pop().unwrap();
    let bound = i128::try_from(f0.abs().max(BigInt::one()))
        .map_err(|_| Error::InvalidParameter("oracle bound exceeds i128".into()))?;
    let to_i128 = |x: &BigInt| i128::try_from(x).map_err(|_| Error::InvalidParameter("oracle input exceeds i128".into()));
    let (c1, c2, u2) = (to_i128(c.numer())?, to_i128(c.denom())?, to_i128(&u2)?);

    let step = |(a, b): (i128, i128)| -> Option<(i128, i128)> {
        let ad = a.checked_pow(d)?;
        let bd = b.checked_pow(d)?;
        let num = ad.checked_mul(c2)?.checked_add(c1.checked_mul(bd)?)?;
        let den = bd.checked_mul(c2)?;
        let g = num.gcd(&den);
        Some((num / g, den / g))
    };
    let periodic = |u1: i128| -> Option<u32> {
        let start = (u1, u2);
        let mut x = start;
        for m in 1..=n {
            x = step(x)?;
            if x == start {
                return Some(m);
            }
        }
        None
    };
    let hits: Vec<i128> = (-bound..=bound)
        .into_par_iter()
        .filter(|&u1| u1.gcd(&u2) == 1 && periodic(u1) == Some(n))
        .collect();

    let mut cycles: BTreeMap<Vec<i128>, ()> = BTreeMap::new();
    for &u1 in &hits {
        let mut members = vec![(u1, u2)];
        for _ in 1..n {
            members.push(step(*members.last().unwrap()).unwrap());
        }
        let min_pos = (0..members.len()).min_by_key(|&i| members[i].0).unwrap();
        members.rotate_left(min_pos);
        cycles.insert(members.iter().map(|m| m.0).collect(), ());
    }
    cycles
        .into_keys()
        .map(|cyc| {
            cyc.into_iter()
                .map(|a| BigRat::new(BigInt::from(a), BigInt::from(u2)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRat {
        s.parse().unwrap()
    }

    fn cycles(d: u32, c: &str, n: u32, strategy: SearchStrategy) -> Vec<Vec<String>> {
        find_periodic_with(d, &r(c), n, &SearchConfig::with_strategy(strategy))
            .unwrap()
            .into_iter()
            .map(|rec| rec.orbit.iter().map(ToString::to_string).collect())
            .collect()
    }

    #[test]
    fn gate_examples() {
        assert_eq!(denominator_gate(2, &r("-29/16")), Some(BigInt::from(4)));
        assert_eq!(denominator_gate(2, &r("1/2")), None);
        assert_eq!(denominator_gate(3, &r("5/27")), Some(BigInt::from(3)));
        assert_eq!(denominator_gate(2, &r("7")), Some(BigInt::one()));
    }

    #[test]
    fn search_examples() {
        for s in [SearchStrategy::Divisors, SearchStrategy::Window, SearchStrategy::Auto] {
            assert_eq!(cycles(2, "0", 1, s), vec![vec!["0"], vec!["1"]]);
            assert_eq!(cycles(2, "-1", 2, s), vec![vec!["-1", "0"]]);
            assert_eq!(cycles(2, "-29/16", 3, s), vec![vec!["-7/4", "5/4", "-1/4"]]);
            assert!(cycles(2, "-3/4", 2, s).is_empty());
            assert_eq!(cycles(2, "-3/4", 1, s), vec![vec!["-1/2"], vec!["3/2"]]);
            assert_eq!(cycles(2, "2/9", 1, s), vec![vec!["1/3"], vec!["2/3"]]);
            assert!(cycles(2, "1/2", 1, s).is_empty());
        }
    }

    #[test]
    fn period_examples() {
        assert_eq!(exact_period(2, &r("-1"), &r("0"), 4), Some(2));
        assert_eq!(exact_period(2, &r("-29/16"), &r("5/4"), 6), Some(3));
        assert_eq!(exact_period(2, &r("0"), &r("2"), 10), None);
    }

    #[test]
    fn conjugated_examples() {
        let b = |v: i64| BigInt::from(v);
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(conjugated_orbit(2, &b(-29), &b(4), &b(-1), 3).unwrap(), ints(&[-1, -7, 5, -1]));
        assert_eq!(conjugated_orbit(2, &b(-1), &b(1), &b(0), 2).unwrap(), ints(&[0, -1, 0]));
        assert_eq!(conjugated_orbit(2, &b(0), &b(1), &b(1), 1).unwrap(), ints(&[1, 1]));
        assert!(matches!(
            conjugated_orbit(2, &b(-29), &b(4), &b(2), 2),
            Err(Error::NotPeriodic(_))
        ));
    }

    #[test]
    fn cycles_lead_with_smallest_member() {
        let recs = find_periodic(2, &r("-29/16"), 3).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].u, r("-7/4"));
        assert_eq!(recs[0].u1_list, vec![BigInt::from(-7), BigInt::from(5), BigInt::from(-1)]);
    }

    #[test]
    fn brute_force_agrees_on_examples() {
        for (c, n) in [("0", 1), ("-1", 2), ("-29/16", 3), ("-3/4", 1), ("-2", 1), ("1/4", 1)] {
            let fast: Vec<Vec<BigRat>> = find_periodic(2, &r(c), n)
                .unwrap()
                .into_iter()
                .map(|rec| rec.orbit)
                .collect();
            assert_eq!(brute_force_periodic(2, &r(c), n).unwrap(), fast, "c = {c}, n = {n}");
        }
    }

    #[test]
    fn report_json_shape() {
        let rep = periodic_report(2, &r("-29/16"), 3).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["c"], "-29/16");
        assert_eq!(v["d"], 2);
        assert_eq!(v["n"], 3);
        assert_eq!(v["cycles"], serde_json::json!([["-7/4", "5/4", "-1/4"]]));
        assert!(v["checks"].as_object().unwrap().values().all(|x| x != "fail"));
        let back: PeriodicReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
