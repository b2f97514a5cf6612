//! Height-bounded counts.
//!
//! `S(N)` is the set of reduced `α/β` with `h ≤ N`, and `S_d(N)` its
//! elements whose denominator is a `d`-th power. Only those `c` can carry a
//! rational periodic point, so the sweep in [`periodic_census`] runs the
//! search on `S_d(N)` alone.
//!
//! `S_d(N)` is counted two ways. `Reduced` keeps the coprimality condition of
//! `S(N)`; `Pairs` counts every numerator `|α| ≤ N` per `d`-th-power
//! denominator, which is the count whose ratio to `|S(N)|` behaves like
//! `π²/(6 N^{(d-1)/d})`. The reduced ratio is smaller by about `6/π²`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::BigRat;
use crate::dynamics::{escape_bound, periodic_report_with, SearchConfig};
use crate::error::{Error, Result};
use crate::iterates::check_degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Reduced,
    Pairs,
}

/// `(|S(N)|, |S_d(N)|, ratio, predicted)` for one variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightCount {
    #[serde(rename = "N")]
    pub n: u64,
    pub d: u32,
    pub variant: Variant,
    pub s_n: u128,
    pub sd_n: u128,
    pub ratio: f64,
    pub predicted: f64,
}

/// `φ(k)` for `k ≤ n`.
pub fn totients(n: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=n as u32).collect();
    for i in 2..=n {
        if phi[i] == i as u32 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u32;
            }
        }
    }
    phi
}

/// `|S(N)| = 1 + 2·#{1 ≤ α, β ≤ N : gcd(α, β) = 1}`.
pub fn count_s(n: u64) -> u128 {
    let phi = totients(n as usize);
    let coprime_pairs: u128 = 2 * phi[1..].iter().map(|&x| x as u128).sum::<u128>() - 1;
    1 + 2 * coprime_pairs
}

fn distinct_primes(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `#{1 ≤ a ≤ n : gcd(a, m) = 1}` by inclusion–exclusion.
fn coprime_count(n: u64, m: u64) -> u64 {
    let primes = distinct_primes(m);
    let mut total: i64 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let prod: u64 = (0..primes.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| primes[i])
            .product();
        let term = (n / prod) as i64;
        total += if mask.count_ones() % 2 == 0 { term } else { -term };
    }
    total as u64
}

/// `⌊n^{1/d}⌋`.
fn iroot(n: u64, d: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / d as f64) as u64;
    while r > 0 && r.checked_pow(d).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(d).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

pub fn count_sd(n: u64, d: u32, variant: Variant) -> u128 {
    let roots = iroot(n, d);
    match variant {
        Variant::Pairs => (2 * n as u128 + 1) * roots as u128,
        Variant::Reduced => (1..=roots)
            .map(|m| {
                if m == 1 {
                    2 * n as u128 + 1
                } else {
                    2 * coprime_count(n, m) as u128
                }
            })
            .sum(),
    }
}

pub fn predicted_ratio(n: u64, d: u32) -> f64 {
    PI * PI / (6.0 * (n as f64).powf((d as f64 - 1.0) / d as f64))
}

pub fn count_heights(n: u64, d: u32, variant: Variant) -> Result<HeightCount> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("height bound N must be ≥ 1".into()));
    }
    let s_n = count_s(n);
    let sd_n = count_sd(n, d, variant);
    Ok(HeightCount {
        n,
        d,
        variant,
        s_n,
        sd_n,
        ratio: sd_n as f64 / s_n as f64,
        predicted: predicted_ratio(n, d),
    })
}

/// Both `S_d` variants side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub reduced: HeightCount,
    pub pairs: HeightCount,
}

pub fn density(n: u64, d: u32) -> Result<DensityReport> {
    Ok(DensityReport {
        reduced: count_heights(n, d, Variant::Reduced)?,
        pairs: count_heights(n, d, Variant::Pairs)?,
    })
}

/// Reduced `c` with `h(c) ≤ n` whose denominator is a `d`-th power, ordered
/// by height and then by value.
pub fn gated_values(n: u64, d: u32) -> Vec<BigRat> {
    let mut out = Vec::new();
    for m in 1..=iroot(n, d) {
        let beta = m.pow(d);
        for alpha in -(n as i64)..=n as i64 {
            if alpha.unsigned_abs().gcd(&beta) == 1 {
                out.push(BigRat::new(BigInt::from(alpha), BigInt::from(beta)).expect("nonzero denominator"));
            }
        }
    }
    out.sort_by(|a, b| a.height().cmp(&b.height()).then(a.cmp(b)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub c: BigRat,
    pub n: u32,
    pub cycles: Vec<Vec<BigRat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFailure {
    pub c: BigRat,
    pub n: u32,
    pub error: String,
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusCounts {
    pub s_n: u128,
    pub s_d_reduced: u128,
    pub s_d_pairs: u128,
    pub p_n: u128,
    /// Values of `c` with at least one cycle among the periods searched.
    pub p_d_n: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub periods: Vec<u32>,
    pub counts: CensusCounts,
    pub ratio_reduced: f64,
    pub ratio_pairs: f64,
    pub predicted: f64,
    pub periodic_ratio: f64,
    pub records: Vec<CensusEntry>,
    pub failures: Vec<CensusFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    pub search: SearchConfig,
    /// Refuse sweeps whose summed search windows exceed this.
    pub volume_cap: u128,
    /// Periods to search; `None` means `1..=n_max`.
    pub periods: Option<Vec<u32>>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            search: SearchConfig::default(),
            volume_cap: 1_000_000_000,
            periods: None,
        }
    }
}

/// Estimated candidate volume of a sweep: window sizes summed over all `c`
/// and periods.
pub fn census_volume(values: &[BigRat], d: u32, periods: usize) -> u128 {
    values
        .iter()
        .map(|c| {
            let u2 = c.denom().nth_root(d);
            let w = 2 * escape_bound(d, c, &u2) + 1u32;
            u128::try_from(w).unwrap_or(u128::MAX)
        })
        .fold(0u128, |acc, w| acc.saturating_add(w.saturating_mul(periods as u128)))
}

pub fn periodic_census(d: u32, n: u64, n_max: u32) -> Result<CensusReport> {
    periodic_census_with(d, n, n_max, &CensusConfig::default())
}

/// Runs the periodic-point search for every `c ∈ S_d(N)` and period. A
/// failure for one `(c, n)` is recorded and the sweep continues.
pub fn periodic_census_with(d: u32, n: u64, n_max: u32, cfg: &CensusConfig) -> Result<CensusReport> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("height bound N must be ≥ 1".into()));
    }
    let periods: Vec<u32> = match &cfg.periods {
        Some(list) => list.clone(),
        None => (1..=n_max).collect(),
    };
    if periods.is_empty() || periods.contains(&0) {
        return Err(Error::InvalidParameter("periods must be a nonempty list of positive integers".into()));
    }
    // Every window holds at least 3 candidates; reject oversized sweeps
    // before materializing the values.
    let floor = count_sd(n, d, Variant::Reduced).saturating_mul(3 * periods.len() as u128);
    if floor > cfg.volume_cap {
        return Err(Error::CensusBudget {
            estimate: floor,
            cap: cfg.volume_cap,
        });
    }
    let values = gated_values(n, d);
    let estimate = census_volume(&values, d, periods.len());
    if estimate > cfg.volume_cap {
        return Err(Error::CensusBudget {
            estimate,
            cap: cfg.volume_cap,
        });
    }

    let per_c: Vec<(Vec<CensusEntry>, Vec<CensusFailure>)> = values
        .par_iter()
        .map(|c| {
            let mut found = Vec::new();
            let mut failed = Vec::new();
            for &p in &periods {
                match periodic_report_with(d, c, p, &cfg.search) {
                    Ok(rep) if !rep.cycles.is_empty() => found.push(CensusEntry {
                        c: c.clone(),
                        n: p,
                        cycles: rep.cycles,
                    }),
                    Ok(_) => {}
                    Err(e) => failed.push(CensusFailure {
                        c: c.clone(),
                        n: p,
                        incomplete: e.is_incomplete(),
                        error: e.to_string(),
                    }),
                }
            }
            (found, failed)
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut p_d_n = 0u128;
    for (found, failed) in per_c {
        if !found.is_empty() {
            p_d_n += 1;
        }
        records.extend(found);
        failures.extend(failed);
    }
    let s_n = count_s(n);
    let s_d_reduced = count_sd(n, d, Variant::Reduced);
    let s_d_pairs = count_sd(n, d, Variant::Pairs);
    Ok(CensusReport {
        d,
        n,
        periods,
        counts: CensusCounts {
            s_n,
            s_d_reduced,
            s_d_pairs,
            p_n: s_n,
            p_d_n,
        },
        ratio_reduced: s_d_reduced as f64 / s_n as f64,
        ratio_pairs: s_d_pairs as f64 / s_n as f64,
        predicted: predicted_ratio(n, d),
        periodic_ratio: p_d_n as f64 / s_n as f64,
        records,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_s(n: i64) -> u128 {
        let mut count = 0;
        for b in 1..=n {
            for a in -n..=n {
                if a.unsigned_abs().gcd(&(b as u64)) == 1 || (a == 0 && b == 1) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn small_counts() {
        let c = count_heights(2, 2, Variant::Reduced).unwrap();
        assert_eq!((c.s_n, c.sd_n), (7, 5));
        assert!((c.ratio - 5.0 / 7.0).abs() < 1e-12);
        let c = count_heights(3, 2, Variant::Reduced).unwrap();
        assert_eq!((c.s_n, c.sd_n), (15, 7));
        for n in 1..=40 {
            assert_eq!(count_s(n), brute_s(n as i64), "N = {n}");
            for d in 2..=4 {
                assert_eq!(count_sd(n, d, Variant::Reduced), gated_values(n, d).len() as u128);
            }
        }
    }

    #[test]
    fn pairs_variant() {
        assert_eq!(count_sd(100, 2, Variant::Pairs), 201 * 10);
        assert_eq!(count_sd(26, 3, Variant::Pairs), 53 * 2);
        assert_eq!(iroot(999_999, 2), 999);
        assert_eq!(iroot(1_000_000, 2), 1000);
        assert_eq!(iroot(1_000_000, 3), 100);
    }

    #[test]
    fn census_examples() {
        let rep = periodic_census(2, 20, 3).unwrap();
        let show: Vec<(String, u32, Vec<Vec<String>>)> = rep
            .records
            .iter()
            .map(|e| {
                (
                    e.c.to_string(),
                    e.n,
                    e.cycles
                        .iter()
                        .map(|cy| cy.iter().map(ToString::to_string).collect())
                        .collect(),
                )
            })
            .collect();
        let has = |c: &str, n: u32, cycles: &[&[&str]]| {
            let want: Vec<Vec<String>> = cycles
                .iter()
                .map(|cy| cy.iter().map(|s| s.to_string()).collect())
                .collect();
            show.iter().any(|(cc, nn, cy)| cc == c && *nn == n && *cy == want)
        };
        assert!(has("0", 1, &[&["0"], &["1"]]));
        assert!(has("-1", 2, &[&["-1", "0"]]));
        assert!(has("-2", 1, &[&["-1"], &["2"]]));
        assert!(has("-3/4", 1, &[&["-1/2"], &["3/2"]]));
        assert!(has("1/4", 1, &[&["1/2"]]));
        assert!(rep.records.iter().all(|e| e.n != 3));
        assert!(rep.failures.is_empty());

        let rep = periodic_census(2, 29, 3).unwrap();
        assert!(rep.records.iter().any(|e| e.n == 3 && e.c.to_string() == "-29/16"));

        let rep = periodic_census(2, 1, 5).unwrap();
        let cs: Vec<String> = rep.records.iter().map(|e| e.c.to_string()).collect();
        assert!(cs.iter().all(|c| c == "0" || c == "-1"));
        assert!(cs.contains(&"0".to_string()) && cs.contains(&"-1".to_string()));
        assert!(rep.counts.p_d_n <= rep.counts.s_d_reduced && rep.counts.s_d_reduced <= rep.counts.s_n);
    }

    #[test]
    fn budget_guard() {
        let cfg = CensusConfig {
            volume_cap: 10,
            ..CensusConfig::default()
        };
        assert!(matches!(
            periodic_census_with(2, 50, 3, &cfg),
            Err(Error::CensusBudget { .. })
        ));
    }
}
