use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_with, is_prime, pow_u, serde_big, FactorBudget};
use crate::error::{Error, Result};
use crate::iterates::check_degree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    #[serde(with = "serde_big::int")]
    pub p: BigInt,
    /// `gcd(p, d^n - 1)`.
    #[serde(with = "serde_big::int")]
    pub gcd_p: BigInt,
    /// `gcd(p - 1, d^n - 1)`.
    #[serde(with = "serde_big::int")]
    pub gcd_p_minus_1: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExclusionOutcome {
    /// No rational periodic point of period `n` exists for any `c = c1/c2`.
    Impossible {
        #[serde(with = "serde_big::int")]
        p: BigInt,
    },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionVerdict {
    pub d: u32,
    #[serde(with = "serde_big::int")]
    pub c1: BigInt,
    pub n: u32,
    /// `d^n - 1`.
    #[serde(with = "serde_big::int")]
    pub m: BigInt,
    pub m_is_prime: bool,
    #[serde(flatten)]
    pub outcome: ExclusionOutcome,
    pub trace: Vec<TraceEntry>,
    /// False when `c1` was only partly factored; the verdict then rests on
    /// the certified primes alone.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl ExclusionVerdict {
    pub fn is_impossible(&self) -> bool {
        matches!(self.outcome, ExclusionOutcome::Impossible { .. })
    }
}

/// Rules out period `n` from the primes of `c1` alone: a prime `p | c1`
/// coprime to `m = d^n - 1` with `gcd(p - 1, m) = 1` cannot coexist with an
/// `n`-cycle. Only claimed for `n ≥ 2`; fixed points escape the argument
/// (`x^2 + 2/9` fixes `1/3`).
pub fn exclusion_filter(d: u32, c1: &BigInt, n: u32) -> Result<ExclusionVerdict> {
    exclusion_filter_with(d, c1, n, &FactorBudget::default())
}

pub fn exclusion_filter_with(d: u32, c1: &BigInt, n: u32, budget: &FactorBudget) -> Result<ExclusionVerdict> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidParameter("period n must be ≥ 1".into()));
    }
    if c1.is_zero() {
        return Err(Error::InvalidParameter("c1 must be nonzero".into()));
    }
    let m = pow_u(&BigInt::from(d), n as u64) - 1u32;
    let m_is_prime = is_prime(&m);
    let fac = factor_with(&c1.abs(), budget);
    let trace: Vec<TraceEntry> = fac
        .factors
        .iter()
        .map(|(p, _)| TraceEntry {
            p: p.clone(),
            gcd_p: p.gcd(&m),
            gcd_p_minus_1: (p - 1u32).gcd(&m),
        })
        .collect();

    let mut verdict = ExclusionVerdict {
        d,
        c1: c1.clone(),
        n,
        m: m.clone(),
        m_is_prime,
        outcome: ExclusionOutcome::Inconclusive,
        trace,
        complete: fac.complete,
        note: None,
    };
    if n < 2 {
        verdict.note = Some("the filter does not apply to fixed points".into());
        return Ok(verdict);
    }
    let witness = verdict.trace.iter().find(|t| {
        t.gcd_p.is_one()
            && (t.gcd_p_minus_1.is_one() || (m_is_prime && !(&t.p - 1u32).mod_floor(&m).is_zero()))
    });
    if let Some(t) = witness {
        verdict.outcome = ExclusionOutcome::Impossible { p: t.p.clone() };
    } else if !fac.complete {
        verdict.note = Some(format!("unfactored cofactor {}", fac.cofactor));
    }
    Ok(verdict)
}
