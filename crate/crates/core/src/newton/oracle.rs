//! Irreducibility oracle for integer polynomials of small degree.
//!
//! The oracle is independent of Newton polygons: it reduces the polynomial
//! modulo several primes, compares the factor-degree patterns, and when the
//! patterns leave room for a factor it Hensel-lifts one modular factorization
//! and tries every combination of lifted factors. A true factor is returned
//! as a witness; exhausting all combinations proves irreducibility.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modp::{degree_pattern, Fp, Poly};
use crate::arith::{is_prime_u64, serde_big};
use crate::error::{Error, Result};

/// Limits for [`irreducibility_oracle_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub degree_cap: usize,
    /// Number of primes whose degree patterns are intersected.
    pub primes: usize,
    /// Maximum number of factor combinations tried during recombination.
    pub combination_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            degree_cap: 16,
            primes: 5,
            combination_budget: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    /// `witness` is a primitive proper factor, lowest degree first.
    Reducible {
        #[serde(with = "serde_big::int_vec")]
        witness: Vec<BigInt>,
    },
    Unknown,
}

impl Irreducibility {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Irreducibility::Reducible { .. })
    }
}

pub fn irreducibility_oracle(coeffs: &[BigInt]) -> Result<Irreducibility> {
    irreducibility_oracle_with(coeffs, &OracleConfig::default())
}

pub fn irreducibility_oracle_with(coeffs: &[BigInt], cfg: &OracleConfig) -> Result<Irreducibility> {
    let f = trim(coeffs.to_vec());
    if f.len() < 2 {
        return Err(Error::InvalidParameter(
            "irreducibility of a constant polynomial is undefined".into(),
        ));
    }
    let degree = f.len() - 1;
    if degree > cfg.degree_cap {
        return Err(Error::DegreeCap {
            degree,
            cap: cfg.degree_cap,
        });
    }
    let f = primitive_part(&f);
    if degree == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if f[0].is_zero() {
        return Ok(reducible(&f, vec![BigInt::zero(), BigInt::one()]));
    }

    let g = rational_gcd(&f, &derivative(&f));
    if g.len() > 1 {
        return Ok(reducible(&f, g));
    }

    let lc = f.last().unwrap().clone();
    let mut possible: Option<BTreeSet<usize>> = None;
    let mut best: Option<(Fp, Poly, usize)> = None;
    let mut used = 0;
    for p in (3u64..).filter(|&p| is_prime_u64(p)) {
        if used == cfg.primes {
            break;
        }
        if (&lc % p).is_zero() {
            continue;
        }
        let field = Fp::new(p);
        let fp = field.monic(&field.reduce_poly(&f));
        if !field.is_squarefree(&fp) {
            continue;
        }
        used += 1;
        let pattern = degree_pattern(&field.distinct_degree(&fp));
        if pattern.len() == 1 {
            return Ok(Irreducibility::Irreducible);
        }
        let sums = subset_sums(&pattern, degree);
        possible = Some(match possible {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        });
        if best.as_ref().is_none_or(|(_, _, r)| pattern.len() < *r) {
            best = Some((field, fp, pattern.len()));
        }
    }
    let possible = possible.expect("at least one usable prime");
    if possible.is_empty() {
        return Ok(Irreducibility::Irreducible);
    }

    let (field, fp, _) = best.unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(field.p);
    let modular = field.factor_squarefree(&fp, &mut rng);
    Ok(recombine(&f, &field, &modular, &possible, cfg.combination_budget))
}

fn reducible(f: &[BigInt], g: Vec<BigInt>) -> Irreducibility {
    let g = normalize_sign(primitive_part(&g));
    let h = normalize_sign(primitive_part(&exact_quotient(f, &g).expect("g divides f")));
    let witness = if (h.len(), &h) < (g.len(), &g) { h } else { g };
    Irreducibility::Reducible { witness }
}

fn subset_sums(pattern: &[usize], degree: usize) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &k in pattern {
        let shifted: Vec<usize> = sums.iter().map(|s| s + k).collect();
        sums.extend(shifted);
    }
    sums.into_iter().filter(|&s| s > 0 && s < degree).collect()
}

/// Hensel-lifts the modular factorization and searches factor combinations.
fn recombine(
    f: &[BigInt],
    field: &Fp,
    modular: &[Poly],
    possible: &BTreeSet<usize>,
    budget: u64,
) -> Irreducibility {
    let lc = f.last().unwrap().clone();
    let p = BigInt::from(field.p);
    // Landau–Mignotte: any factor's coefficients are ≤ 2^deg ‖f‖₂; scaled by lc.
    let norm: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (norm << (f.len() - 1)) * lc.abs() * 2;
    let mut modulus = p.clone();
    let mut exponent = 1u32;
    while modulus <= bound {
        modulus *= &p;
        exponent += 1;
    }
    let lifted = multifactor_lift(f, field, modular, exponent);

    let r = lifted.len();
    let mut tried = 0u64;
    for size in 1..=r / 2 {
        for subset in combinations(r, size) {
            let deg: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
            if !possible.contains(&deg) {
                continue;
            }
            tried += 1;
            if tried > budget {
                return Irreducibility::Unknown;
            }
            let mut g = vec![lc.clone()];
            for &i in &subset {
                g = mul_mod(&g, &lifted[i], &modulus);
            }
            let g = symmetric(&g, &modulus);
            let g = primitive_part(&g);
            if exact_quotient(f, &g).is_some() {
                return reducible(f, g);
            }
        }
    }
    Irreducibility::Irreducible
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lifts `f ≡ lc·Π g_i (mod p)` to monic factors modulo `p^exponent`.
fn multifactor_lift(f: &[BigInt], field: &Fp, modular: &[Poly], exponent: u32) -> Vec<Vec<BigInt>> {
    let p = BigInt::from(field.p);
    let modulus = num_traits::pow(p.clone(), exponent as usize);
    let lc = f.last().unwrap().clone();
    let mut target: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&modulus)).collect();
    let mut out = Vec::with_capacity(modular.len());
    for (idx, g) in modular.iter().enumerate() {
        if idx + 1 == modular.len() {
            // What is left is lc·g_r; normalize to monic.
            let inv = mod_inverse(&lc, &modulus);
            out.push(
                target
                    .iter()
                    .map(|c| (c * &inv).mod_floor(&modulus))
                    .collect(),
            );
            break;
        }
        let rest_mod_p = modular[idx + 1..]
            .iter()
            .fold(vec![field.p_residue(&lc)], |acc, h| field.mul_poly(&acc, h));
        let (big_g, big_h) = hensel_pair(&target, field, g, &rest_mod_p, exponent);
        out.push(big_g);
        target = big_h;
    }
    out
}

impl Fp {
    fn p_residue(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

/// Two-factor linear Hensel lifting: from `F ≡ G·H (mod p)` with `G` monic and
/// `lc(H) = lc(F)`, returns `(G, H)` modulo `p^exponent`.
fn hensel_pair(
    target: &[BigInt],
    field: &Fp,
    g0: &Poly,
    h0: &Poly,
    exponent: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(field.p);
    let (one, _, t) = field.xgcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let lc = target.last().unwrap().clone();
    let mut g: Vec<BigInt> = g0.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: Vec<BigInt> = h0.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = p.clone();
    for _ in 1..exponent {
        let next = &pj * &p;
        *h.last_mut().unwrap() = lc.mod_floor(&next);
        let prod = mul_mod(&g, &h, &next);
        let diff: Vec<BigInt> = (0..target.len())
            .map(|i| {
                let a = target.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&next) / &pj
            })
            .collect();
        let e = field.trim(diff.iter().map(|c| c.to_u64().unwrap() % field.p).collect());
        if !e.is_empty() {
            let tau = field.rem(&field.mul_poly(&t, &e), g0);
            let sigma = field.divrem(&field.sub(&e, &field.mul_poly(&tau, h0)), g0).0;
            add_scaled(&mut g, &tau, &pj, &next);
            add_scaled(&mut h, &sigma, &pj, &next);
        }
        pj = next;
    }
    *h.last_mut().unwrap() = lc.mod_floor(&pj);
    (g, h)
}

fn add_scaled(a: &mut Vec<BigInt>, delta: &Poly, scale: &BigInt, modulus: &BigInt) {
    if a.len() < delta.len() {
        a.resize(delta.len(), BigInt::zero());
    }
    for (x, &d) in a.iter_mut().zip(delta) {
        *x = (&*x + scale * d).mod_floor(modulus);
    }
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn primitive_part(a: &[BigInt]) -> Vec<BigInt> {
    let content = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() || content.is_one() {
        return a.to_vec();
    }
    a.iter().map(|c| c / &content).collect()
}

fn normalize_sign(a: Vec<BigInt>) -> Vec<BigInt> {
    if a.last().is_some_and(Signed::is_negative) {
        a.into_iter().map(|c| -c).collect()
    } else {
        a
    }
}

fn derivative(a: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i)
        .collect()
}

fn to_rational(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let coef = &r[i + b.len() - 1] / lb;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &coef * bj;
        }
        q[i] = coef;
    }
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    (q, r)
}

/// Primitive integer gcd of two integer polynomials, computed over Q.
fn rational_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut x, mut y) = (to_rational(a), to_rational(b));
    while y.last().is_some_and(Zero::is_zero) {
        y.pop();
    }
    while !y.is_empty() {
        let (_, r) = rational_rem(&x, &y);
        x = y;
        y = r;
    }
    let denom_lcm = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    primitive_part(&ints)
}

/// `f / g` when `g` divides `f` in `Z[x]` (with `g` primitive).
fn exact_quotient(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    if g.len() > f.len() {
        return None;
    }
    let (q, r) = rational_rem(&to_rational(f), &to_rational(g));
    if !r.is_empty() {
        return None;
    }
    q.iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn oracle_examples() {
        // 9x^4 - 24x^2 + 4 = (3x^2 - 6x + 2)(3x^2 + 6x + 2)
        assert_eq!(
            irreducibility_oracle(&ints(&[4, 0, -24, 0, 9])).unwrap(),
            Irreducibility::Reducible {
                witness: ints(&[2, -6, 3])
            }
        );
        assert_eq!(
            irreducibility_oracle(&ints(&[1, 0, 0, 0, 1])).unwrap(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            irreducibility_oracle(&ints(&[-29, 0, 16])).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn degenerate_inputs() {
        assert!(irreducibility_oracle(&ints(&[5])).is_err());
        assert!(matches!(
            irreducibility_oracle(&ints(&[1; 18])),
            Err(Error::DegreeCap { degree: 17, cap: 16 })
        ));
        // x^2 + x
        assert!(irreducibility_oracle(&ints(&[0, 1, 1])).unwrap().is_reducible());
        // (x + 1)^2
        assert_eq!(
            irreducibility_oracle(&ints(&[1, 2, 1])).unwrap(),
            Irreducibility::Reducible {
                witness: ints(&[1, 1])
            }
        );
        assert_eq!(
            irreducibility_oracle(&ints(&[6, 4])).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn finds_factors_of_products() {
        let cases: &[(&[i64], &[i64])] = &[
            (&[2, 0, 1], &[2, 0, 1]),
            (&[1, 1, 1], &[-1, 0, 0, 1]),
            (&[7, -3, 0, 5], &[1, 2, 0, 0, 1]),
            (&[2, 2, 1], &[2, -2, 1]), // x^4 + 4
            (&[3, 0, 0, 0, 0, 1], &[-2, 1, 0, 0, 0, 0, 4]),
        ];
        for (a, b) in cases {
            let prod = mul_mod(&ints(a), &ints(b), &BigInt::from(10).pow(30));
            let prod = symmetric(&prod, &BigInt::from(10).pow(30));
            match irreducibility_oracle(&prod).unwrap() {
                Irreducibility::Reducible { witness } => {
                    assert!(exact_quotient(&prod, &witness).is_some());
                    assert!(witness.len() >= 2 && witness.len() < prod.len());
                }
                other => panic!("{a:?}·{b:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn cyclotomic_irreducible() {
        // Φ_15 = x^8 - x^7 + x^5 - x^4 + x^3 - x + 1, reducible mod every prime.
        assert_eq!(
            irreducibility_oracle(&ints(&[1, -1, 0, 1, -1, 1, 0, -1, 1])).unwrap(),
            Irreducibility::Irreducible
        );
    }
}
