//! Primitive prime divisors of the critical orbit `F_0^1, F_0^2, ...`.
//!
//! A prime is primitive at index `n` when it divides `F_0^n` but no earlier
//! term. Cycle numerators of exact period `n ≥ 2` are built only from
//! primitive primes at index `n`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor, pow_u};
use crate::dynamics::PeriodicPointRecord;
use crate::error::{Error, Result};
use crate::iterates::CriticalOrbit;

/// Primitive prime sets per index, stopping before the first zero term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveSets {
    /// Keyed by 1-based index, primes ascending.
    #[serde(with = "prime_sets")]
    pub primitive: BTreeMap<usize, Vec<BigInt>>,
    /// Index of the first zero term, where analysis stopped.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncated_at: Option<usize>,
}

impl PrimitiveSets {
    pub fn at(&self, k: usize) -> Option<&[BigInt]> {
        self.primitive.get(&k).map(Vec::as_slice)
    }
}

mod prime_sets {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BTreeMap<usize, Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        // Numeric key order, so "10" follows "9".
        let mut map = s.serialize_map(Some(v.len()))?;
        for (k, ps) in v {
            let ps: Vec<String> = ps.iter().map(ToString::to_string).collect();
            map.serialize_entry(&k.to_string(), &ps)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, Vec<BigInt>>, D::Error> {
        let raw = BTreeMap::<String, Vec<String>>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, ps)| {
                let k = k.parse().map_err(serde::de::Error::custom)?;
                let ps = ps
                    .iter()
                    .map(|p| p.parse().map_err(serde::de::Error::custom))
                    .collect::<Result<_, _>>()?;
                Ok((k, ps))
            })
            .collect()
    }
}

/// Primitive primes of each orbit term. Every nonzero term before the first
/// zero must be completely factored.
pub fn primitive_divisors(orbit: &CriticalOrbit) -> Result<PrimitiveSets> {
    let mut seen: BTreeSet<BigInt> = BTreeSet::new();
    let mut primitive = BTreeMap::new();
    let mut truncated_at = None;
    for (i, fac) in orbit.factorizations.iter().enumerate() {
        let Some(fac) = fac else {
            truncated_at = Some(i + 1);
            break;
        };
        if !fac.complete {
            return Err(Error::IncompleteFactorization {
                value: orbit.terms[i].clone(),
                cofactor: fac.cofactor.clone(),
            });
        }
        let fresh: Vec<BigInt> = fac.primes().filter(|p| !seen.contains(*p)).cloned().collect();
        seen.extend(fresh.iter().cloned());
        primitive.insert(i + 1, fresh);
    }
    Ok(PrimitiveSets {
        primitive,
        truncated_at,
    })
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

/// `F_0^m | F_0^n` for every pair of indices with `m | n`.
pub fn divisibility_check(orbit: &CriticalOrbit) -> bool {
    let len = orbit.terms.len();
    (1..=len).all(|m| {
        (2 * m..=len)
            .step_by(m)
            .all(|n| divides(orbit.term(m), orbit.term(n)))
    })
}

/// Any prime dividing `F_0^m` and `F_0^n` with `m < n` also divides `F_0^{n-m}`.
pub fn shifted_orbit_check(orbit: &CriticalOrbit) -> bool {
    let end = orbit.first_zero().map_or(orbit.terms.len(), |z| z - 1);
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    for fac in orbit.factorizations[..end].iter().flatten() {
        primes.extend(fac.primes().cloned());
    }
    primes.iter().all(|p| {
        let hits: Vec<usize> = (1..=end).filter(|&k| (orbit.term(k) % p).is_zero()).collect();
        hits.iter()
            .all(|&m| hits.iter().filter(|&&n| n > m).all(|&n| hits.contains(&(n - m))))
    })
}

/// Verification of the primitive-prime statements for one cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveReport {
    pub n: u32,
    #[serde(with = "prime_sets")]
    pub primitive: BTreeMap<usize, Vec<BigInt>>,
    /// Every prime of every cycle numerator is primitive at index `n`.
    pub thm_primes_of_u1: bool,
    /// At least `n - 1` primitive primes at index `n`.
    pub count_bound: bool,
    /// See [`shifted_orbit_check`].
    pub shifted_orbit: bool,
    /// True when the statements held only because there was nothing to test
    /// (0 on the cycle, or no primes in the numerators).
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl PrimitiveReport {
    pub fn passed(&self) -> bool {
        self.thm_primes_of_u1 && self.count_bound && self.shifted_orbit
    }
}

/// Checks a cycle of exact period `n ≥ 2` against the critical orbit; `None`
/// for fixed points, where the statements are not claimed.
pub fn periodic_primitive_check(rec: &PeriodicPointRecord, orbit: &CriticalOrbit) -> Result<Option<PrimitiveReport>> {
    let n = rec.n as usize;
    if n < 2 {
        return Ok(None);
    }
    if orbit.terms.len() < n {
        return Err(Error::InvalidParameter(format!(
            "critical orbit has {} terms, period {n} needs {n}",
            orbit.terms.len()
        )));
    }
    if orbit.first_zero().is_some_and(|z| z <= n) {
        // 0 lies on the cycle, every prime divides 0 and primitivity degenerates.
        let sets = primitive_divisors(orbit)?;
        return Ok(Some(PrimitiveReport {
            n: rec.n,
            primitive: sets.primitive,
            thm_primes_of_u1: true,
            count_bound: true,
            shifted_orbit: true,
            vacuous: true,
            note: Some("0 is periodic; primitivity is not defined past the zero term".into()),
        }));
    }
    let sets = primitive_divisors(orbit)?;
    let at_n: BTreeSet<BigInt> = sets.primitive[&n].iter().cloned().collect();
    let mut numerator_primes = BTreeSet::new();
    for u1 in &rec.u1_list {
        let fac = factor(u1);
        if !fac.complete {
            return Err(Error::IncompleteFactorization {
                value: u1.clone(),
                cofactor: fac.cofactor,
            });
        }
        numerator_primes.extend(fac.factors.into_iter().map(|(p, _)| p));
    }
    let mut primitive = sets.primitive;
    primitive.retain(|&k, _| k <= n);
    Ok(Some(PrimitiveReport {
        n: rec.n,
        thm_primes_of_u1: numerator_primes.iter().all(|p| at_n.contains(p)),
        count_bound: at_n.len() + 1 >= n,
        shifted_orbit: shifted_orbit_check(orbit),
        vacuous: numerator_primes.is_empty(),
        primitive,
        note: None,
    }))
}

/// Critical orbit together with its primitive primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    #[serde(flatten)]
    pub orbit: CriticalOrbit,
    pub primitive: PrimitiveSets,
    pub divisibility: bool,
}

pub fn orbit_report(orbit: CriticalOrbit) -> Result<OrbitReport> {
    Ok(OrbitReport {
        primitive: primitive_divisors(&orbit)?,
        divisibility: divisibility_check(&orbit),
        orbit,
    })
}

/// `gcd(b(k), b(l)) = b(gcd(k, l))` for `b(m) = (a^m - b^m)/(a - b)`.
pub fn ratio_gcd_property(a: &BigInt, b: &BigInt, k: u32, l: u32) -> Result<bool> {
    if a == b || !a.gcd(b).is_one() {
        return Err(Error::InvalidParameter("need a ≠ b with gcd(a, b) = 1".into()));
    }
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("exponents must be positive".into()));
    }
    let ratio = |m: u32| (pow_u(a, m as u64) - pow_u(b, m as u64)) / (a - b);
    Ok(ratio(k).gcd(&ratio(l)) == ratio(k.gcd(&l)).abs())
}
