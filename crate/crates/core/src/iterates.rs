//! Iterates of `f(x) = x^d + c`.
//!
//! `f^n` only has monomials `x^{i·d}`, so tables are indexed by `i = 0..=d^{n-1}`
//! and hold the coefficient of `x^{i·d}`. Writing `P_n(y)` for `f^n` in the
//! variable `y = x^d`, the recursion is `P_1 = y + c`, `P_{n+1} = P_n^d + c`.
//! The cleared form `H_n = c2^{d^{n-1}} P_n` satisfies the integer recursion
//! `H_1 = c2·y + c1`, `H_{n+1} = H_n^d + c1·c2^{d^n - 1}`.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_with, pow_u, serde_big, BigRat, FactorBudget, Factorization};
use crate::error::{Error, Result};

/// Default cap on coefficient slots `d^{n-1}`.
pub const DEFAULT_MAX_SLOTS: usize = 1 << 20;

/// Refuses tables larger than `max_slots` coefficient slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuard {
    pub max_slots: usize,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard {
            max_slots: DEFAULT_MAX_SLOTS,
        }
    }
}

impl SizeGuard {
    /// `d^{n-1}` if it fits under the guard.
    pub fn slots(&self, d: u32, n: u32) -> Result<usize> {
        check_degree(d)?;
        if n == 0 {
            return Err(Error::InvalidParameter("iterate index n must be ≥ 1".into()));
        }
        let mut slots: u128 = 1;
        for _ in 1..n {
            slots = slots.saturating_mul(d as u128);
            if slots > self.max_slots as u128 {
                return Err(Error::SizeGuard {
                    slots,
                    limit: self.max_slots,
                });
            }
        }
        Ok(slots as usize)
    }
}

pub(crate) fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("degree d = {d} must be ≥ 2")));
    }
    Ok(())
}

pub(crate) fn check_coprime(c1: &BigInt, c2: &BigInt) -> Result<()> {
    if c2 <= &BigInt::zero() {
        return Err(Error::InvalidParameter(format!(
            "denominator c2 = {c2} must be positive"
        )));
    }
    if !c1.gcd(c2).is_one() {
        return Err(Error::NotCoprime {
            c1: c1.clone(),
            c2: c2.clone(),
        });
    }
    Ok(())
}

fn poly_mul<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Zero + AddAssign,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow<T>(base: &[T], mut e: u32) -> Vec<T>
where
    T: Clone + Zero + One + AddAssign,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut acc = vec![T::one()];
    let mut sq = base.to_vec();
    loop {
        if e & 1 == 1 {
            acc = poly_mul(&acc, &sq);
        }
        e >>= 1;
        if e == 0 {
            return acc;
        }
        sq = poly_mul(&sq, &sq);
    }
}

/// Coefficients of `g_n` with `f^n(0) = c + c^d·g_n(c)`, lowest degree first.
///
/// `g_2 = 1` and `g_{k+1}(x) = (1 + x^{d-1} g_k(x))^d`; the result has degree
/// exactly `d^{n-1} - d`.
pub fn g_poly(d: u32, n: u32) -> Result<Vec<BigInt>> {
    g_poly_with(d, n, &SizeGuard::default())
}

pub fn g_poly_with(d: u32, n: u32, guard: &SizeGuard) -> Result<Vec<BigInt>> {
    if n < 2 {
        return Err(Error::InvalidParameter("g_n is defined for n ≥ 2".into()));
    }
    guard.slots(d, n)?;
    let mut g = vec![BigInt::one()];
    for _ in 2..n {
        let mut inner = vec![BigInt::zero(); d as usize - 1];
        inner[0] = BigInt::one();
        // 1 + x^{d-1} g
        inner.extend(g.iter().cloned());
        g = poly_pow(&inner, d);
    }
    Ok(g)
}

/// Exact coefficients of `f^n`: `coeffs[i]` multiplies `x^{i·d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterateTable {
    pub d: u32,
    pub n: u32,
    pub c: BigRat,
    pub coeffs: Vec<BigRat>,
}

impl IterateTable {
    /// Dense coefficients in `x`, length `d^n + 1`.
    pub fn to_full_degree(&self) -> Vec<BigRat> {
        spread(&self.coeffs, self.d, BigRat::zero())
    }
}

fn spread<T: Clone>(coeffs: &[T], d: u32, zero: T) -> Vec<T> {
    let d = d as usize;
    let mut out = vec![zero; (coeffs.len() - 1) * d + 1];
    for (i, c) in coeffs.iter().enumerate() {
        out[i * d] = c.clone();
    }
    out
}

pub fn iterate_coeffs(d: u32, c: &BigRat, n: u32) -> Result<IterateTable> {
    iterate_coeffs_with(d, c, n, &SizeGuard::default())
}

pub fn iterate_coeffs_with(d: u32, c: &BigRat, n: u32, guard: &SizeGuard) -> Result<IterateTable> {
    guard.slots(d, n)?;
    let c_ratio: BigRational = c.as_ratio().clone();
    let mut p = vec![c_ratio.clone(), BigRational::one()];
    for _ in 1..n {
        p = poly_pow(&p, d);
        p[0] += &c_ratio;
    }
    Ok(IterateTable {
        d,
        n,
        c: c.clone(),
        coeffs: p.into_iter().map(BigRat::from).collect(),
    })
}

/// `c2^{d^{n-1}}·f^n(x)` as an integer vector `F[i]` on `x^{i·d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearedIterate {
    pub d: u32,
    pub n: u32,
    #[serde(with = "serde_big::int")]
    pub c1: BigInt,
    #[serde(with = "serde_big::int")]
    pub c2: BigInt,
    #[serde(rename = "F", with = "serde_big::int_vec")]
    pub f: Vec<BigInt>,
}

impl ClearedIterate {
    /// `F_0`, the cleared constant term.
    pub fn constant(&self) -> &BigInt {
        &self.f[0]
    }

    /// Dense `H_n` in `x`, lowest degree first, length `d^n + 1`.
    pub fn to_full_degree(&self) -> Vec<BigInt> {
        spread(&self.f, self.d, BigInt::zero())
    }

    /// `d^{n-1}`, the exponent used when clearing.
    pub fn top_index(&self) -> usize {
        self.f.len() - 1
    }
}

pub fn cleared_iterate(d: u32, c1: &BigInt, c2: &BigInt, n: u32) -> Result<ClearedIterate> {
    cleared_iterate_with(d, c1, c2, n, &SizeGuard::default())
}

pub fn cleared_iterate_with(
    d: u32,
    c1: &BigInt,
    c2: &BigInt,
    n: u32,
    guard: &SizeGuard,
) -> Result<ClearedIterate> {
    check_coprime(c1, c2)?;
    guard.slots(d, n)?;
    let mut h = vec![c1.clone(), c2.clone()];
    let mut clear_exp: u64 = 1;
    for _ in 1..n {
        clear_exp *= d as u64;
        h = poly_pow(&h, d);
        h[0] += c1 * pow_u(c2, clear_exp - 1);
    }
    Ok(ClearedIterate {
        d,
        n,
        c1: c1.clone(),
        c2: c2.clone(),
        f: h,
    })
}

/// Formal coefficients of `f^n` as polynomials in `c`: entry `i` lists the
/// integer coefficients (lowest degree first) of `f_i(c)`.
pub fn formal_coeffs(d: u32, n: u32) -> Result<Vec<Vec<BigInt>>> {
    check_degree(d)?;
    SizeGuard { max_slots: 1 << 12 }.slots(d, n)?;
    // P in Z[c][y]; each y-coefficient is a c-polynomial.
    let c_poly = vec![BigInt::zero(), BigInt::one()];
    let mut p: Vec<Vec<BigInt>> = vec![c_poly.clone(), vec![BigInt::one()]];
    for _ in 1..n {
        let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for _ in 0..d {
            let mut next = vec![Vec::new(); acc.len() + p.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in p.iter().enumerate() {
                    let prod = poly_mul(a, b);
                    add_into(&mut next[i + j], &prod);
                }
            }
            acc = next;
        }
        add_into(&mut acc[0], &c_poly);
        p = acc;
    }
    for coeff in &mut p {
        while coeff.last().is_some_and(Zero::is_zero) {
            coeff.pop();
        }
    }
    Ok(p)
}

fn add_into(acc: &mut Vec<BigInt>, other: &[BigInt]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// One step of `x ↦ x^d + c`.
pub fn apply(d: u32, c: &BigRat, u: &BigRat) -> BigRat {
    &u.pow(d) + c
}

/// `[u, f(u), ..., f^steps(u)]`.
pub fn orbit_eval(d: u32, c: &BigRat, u: &BigRat, steps: usize) -> Vec<BigRat> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(u.clone());
    for _ in 0..steps {
        let next = apply(d, c, out.last().unwrap());
        out.push(next);
    }
    out
}

/// `F_0^k = c2^{d^{k-1}} f^k(0)` for `k = 1..=count`, via
/// `F_0^1 = c1`, `F_0^{k+1} = (F_0^k)^d + c1·c2^{d^k - 1}`.
pub fn critical_terms(d: u32, c1: &BigInt, c2: &BigInt, count: u32) -> Result<Vec<BigInt>> {
    check_degree(d)?;
    check_coprime(c1, c2)?;
    let mut terms = Vec::with_capacity(count as usize);
    if count == 0 {
        return Ok(terms);
    }
    terms.push(c1.clone());
    let mut clear_exp: u64 = 1;
    for _ in 1..count {
        clear_exp = clear_exp
            .checked_mul(d as u64)
            .ok_or_else(|| Error::InvalidParameter("critical orbit index too large".into()))?;
        let prev = terms.last().unwrap();
        let next = num_traits::pow(prev.clone(), d as usize) + c1 * pow_u(c2, clear_exp - 1);
        terms.push(next);
    }
    Ok(terms)
}

/// The cleared critical orbit with a factorization of every nonzero term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalOrbit {
    pub d: u32,
    pub n: u32,
    #[serde(with = "serde_big::int")]
    pub c1: BigInt,
    #[serde(with = "serde_big::int")]
    pub c2: BigInt,
    /// `terms[k-1] = F_0^k`.
    #[serde(rename = "F", with = "serde_big::int_vec")]
    pub terms: Vec<BigInt>,
    /// `None` marks a zero term (0 is periodic).
    pub factorizations: Vec<Option<Factorization>>,
}

impl CriticalOrbit {
    /// 1-based term access.
    pub fn term(&self, k: usize) -> &BigInt {
        &self.terms[k - 1]
    }

    /// Smallest `k` with `F_0^k = 0`.
    pub fn first_zero(&self) -> Option<usize> {
        self.terms.iter().position(Zero::is_zero).map(|i| i + 1)
    }

    pub fn is_complete(&self) -> bool {
        self.factorizations
            .iter()
            .flatten()
            .all(|f| f.complete)
    }
}

pub fn critical_orbit(d: u32, c1: &BigInt, c2: &BigInt, count: u32) -> Result<CriticalOrbit> {
    critical_orbit_with(d, c1, c2, count, &FactorBudget::default())
}

pub fn critical_orbit_with(
    d: u32,
    c1: &BigInt,
    c2: &BigInt,
    count: u32,
    budget: &FactorBudget,
) -> Result<CriticalOrbit> {
    if count == 0 {
        return Err(Error::InvalidParameter("orbit length N must be ≥ 1".into()));
    }
    let terms = critical_terms(d, c1, c2, count)?;
    let factorizations = terms
        .iter()
        .map(|t| (!t.is_zero()).then(|| factor_with(t, budget)))
        .collect();
    Ok(CriticalOrbit {
        d,
        n: count,
        c1: c1.clone(),
        c2: c2.clone(),
        terms,
        factorizations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[&str]) -> Vec<BigRat> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn r(s: &str) -> BigRat {
        s.parse().unwrap()
    }

    #[test]
    fn g_poly_examples() {
        assert_eq!(g_poly(2, 2).unwrap(), ints(&[1]));
        assert_eq!(g_poly(2, 3).unwrap(), ints(&[1, 2, 1]));
        assert_eq!(g_poly(3, 3).unwrap(), ints(&[1, 0, 3, 0, 3, 0, 1]));
        assert!(g_poly(2, 1).is_err());
    }

    #[test]
    fn g_poly_degree() {
        for d in 2..=4u32 {
            for n in 2..=5u32 {
                let g = g_poly(d, n).unwrap();
                let expected = d.pow(n - 1) - d;
                assert_eq!(g.len() as u32 - 1, expected, "d={d} n={n}");
                assert!(!g.last().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(iterate_coeffs(2, &r("1"), 2).unwrap().coeffs, rats(&["2", "2", "1"]));
        assert_eq!(
            iterate_coeffs(2, &r("0"), 3).unwrap().coeffs,
            rats(&["0", "0", "0", "0", "1"])
        );
        assert_eq!(
            iterate_coeffs(3, &r("-1"), 2).unwrap().coeffs,
            rats(&["-2", "3", "-3", "1"])
        );
    }

    #[test]
    fn cleared_examples() {
        let one = BigInt::one();
        assert_eq!(
            cleared_iterate(2, &one, &BigInt::from(2), 2).unwrap().f,
            ints(&[3, 4, 4])
        );
        assert_eq!(
            cleared_iterate(2, &BigInt::from(-29), &BigInt::from(16), 1).unwrap().f,
            ints(&[-29, 16])
        );
        assert_eq!(
            cleared_iterate(2, &one, &BigInt::from(3), 2).unwrap().f,
            ints(&[4, 6, 9])
        );
        assert!(matches!(
            cleared_iterate(2, &BigInt::from(2), &BigInt::from(4), 2),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn size_guard_rejects() {
        let guard = SizeGuard { max_slots: 16 };
        assert!(iterate_coeffs_with(2, &r("1"), 5, &guard).is_ok());
        assert!(matches!(
            iterate_coeffs_with(2, &r("1"), 6, &guard),
            Err(Error::SizeGuard { slots: 32, .. })
        ));
        assert!(matches!(
            iterate_coeffs(2, &r("1"), 40),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_eval(2, &r("-1"), &r("0"), 4), rats(&["0", "-1", "0", "-1", "0"]));
        assert_eq!(
            orbit_eval(2, &r("-29/16"), &r("-1/4"), 3),
            rats(&["-1/4", "-7/4", "5/4", "-1/4"])
        );
        assert_eq!(orbit_eval(3, &r("0"), &r("2"), 2), rats(&["2", "8", "512"]));
    }

    #[test]
    fn critical_orbit_examples() {
        let o = critical_orbit(2, &BigInt::from(-29), &BigInt::from(16), 3).unwrap();
        assert_eq!(o.terms, ints(&[-29, 377, 23345]));
        assert!(o.is_complete());
        let o = critical_orbit(2, &BigInt::one(), &BigInt::one(), 4).unwrap();
        assert_eq!(o.terms, ints(&[1, 2, 5, 26]));
        let o = critical_orbit(2, &BigInt::from(-1), &BigInt::one(), 3).unwrap();
        assert_eq!(o.terms, ints(&[-1, 0, -1]));
        assert_eq!(o.first_zero(), Some(2));
        assert!(o.factorizations[1].is_none());
    }

    #[test]
    fn formal_degrees() {
        for d in 2..=3u32 {
            for n in 1..=4u32 {
                let f = formal_coeffs(d, n).unwrap();
                let top = d.pow(n - 1) as usize;
                assert_eq!(f.len(), top + 1);
                for (i, fi) in f.iter().enumerate() {
                    assert_eq!(fi.len() - 1, top - i, "deg f_{i}, d={d} n={n}");
                    if i < top {
                        // f_i ∈ c·Z[c]
                        assert!(fi[0].is_zero());
                    }
                }
                assert_eq!(f[top], vec![BigInt::one()]);
            }
        }
    }

    #[test]
    fn formal_constant_matches_g_poly() {
        // f^n(0) = c + c^d g_n(c)
        for d in 2..=3u32 {
            for n in 2..=4u32 {
                let f0 = &formal_coeffs(d, n).unwrap()[0];
                let g = g_poly(d, n).unwrap();
                let mut expected = vec![BigInt::zero(); d as usize + g.len()];
                expected[1] += 1;
                for (i, gi) in g.iter().enumerate() {
                    expected[d as usize + i] += gi;
                }
                assert_eq!(f0, &expected);
            }
        }
    }

    #[test]
    fn json_shape() {
        let h = cleared_iterate(2, &BigInt::from(-29), &BigInt::from(16), 1).unwrap();
        let v = serde_json_value(&h);
        assert_eq!(v, r#"{"d":2,"n":1,"c1":"-29","c2":"16","F":["-29","16"]}"#);
    }

    fn serde_json_value<T: Serialize>(t: &T) -> String {
        serde_json::to_string(t).unwrap()
    }
}
