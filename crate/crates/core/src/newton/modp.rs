//! Dense univariate polynomials over `F_p` for word-sized odd or even `p`.
//!
//! Coefficients are stored lowest degree first with no trailing zeros; the
//! zero polynomial is the empty vector.

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::pow_mod;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fp {
    pub p: u64,
}

pub(crate) type Poly = Vec<u64>;

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 32)).contains(&p));
        Fp { p }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn trim(&self, mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce_poly(&self, coeffs: &[num_bigint::BigInt]) -> Poly {
        let p = num_bigint::BigInt::from(self.p);
        let reduced = coeffs
            .iter()
            .map(|c| {
                let r = ((c % &p) + &p) % &p;
                u64::try_from(r).expect("residue fits")
            })
            .collect();
        self.trim(reduced)
    }

    pub fn deg(a: &Poly) -> isize {
        a.len() as isize - 1
    }

    #[cfg(test)]
    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        self.trim(out)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0)) % self.p
            })
            .collect();
        self.trim(out)
    }

    pub fn mul_poly(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul(x, y)) % self.p;
            }
        }
        self.trim(out)
    }

    pub fn scale(&self, a: &Poly, k: u64) -> Poly {
        self.trim(a.iter().map(|&x| self.mul(x, k % self.p)).collect())
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv_lc = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for i in (0..q.len()).rev() {
            let coef = self.mul(r[i + b.len() - 1], inv_lc);
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + self.p - self.mul(coef, bj)) % self.p;
            }
        }
        (self.trim(q), self.trim(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul_poly(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul_poly(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("xgcd of two zero polynomials"));
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        self.trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(c, i as u64 % self.p))
                .collect(),
        )
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul_poly(a, b), m)
    }

    pub fn powmod(&self, base: &Poly, exp: &BigUint, m: &Poly) -> Poly {
        let mut acc: Poly = self.rem(&vec![1], m);
        let b = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if exp.bit(i) {
                acc = self.mulmod(&acc, &b, m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self, f: &Poly) -> bool {
        let df = self.derivative(f);
        !df.is_empty() && Fp::deg(&self.gcd(f, &df)) == 0
    }

    /// Distinct-degree factorization of a monic squarefree `f`:
    /// pairs `(k, product of all irreducible factors of degree k)`.
    pub fn distinct_degree(&self, f: &Poly) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x: Poly = vec![0, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut k = 0usize;
        while Fp::deg(&rest) >= 2 * (k as isize + 1) {
            k += 1;
            h = self.powmod(&h, &p, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if Fp::deg(&g) > 0 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((k, g));
            }
        }
        if Fp::deg(&rest) > 0 {
            out.push((rest.len() - 1, rest));
        }
        out
    }

    /// Splits a product of distinct monic irreducibles, all of degree `k`
    /// (Cantor–Zassenhaus; `p` odd).
    pub fn equal_degree<R: Rng>(&self, f: &Poly, k: usize, rng: &mut R) -> Vec<Poly> {
        assert!(self.p % 2 == 1, "equal-degree splitting needs odd p");
        let n = f.len() - 1;
        if n == k {
            return vec![f.clone()];
        }
        let exp = (BigUint::from(self.p).pow(k as u32) - 1u32) / 2u32;
        loop {
            let a: Poly = self.trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if Fp::deg(&a) < 1 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &exp, f), &vec![1]);
            let g = self.gcd(&b, f);
            let dg = Fp::deg(&g);
            if dg > 0 && (dg as usize) < n {
                let other = self.monic(&self.divrem(f, &g).0);
                let mut out = self.equal_degree(&g, k, rng);
                out.extend(self.equal_degree(&other, k, rng));
                return out;
            }
        }
    }

    /// Full factorization of a monic squarefree `f` into monic irreducibles.
    pub fn factor_squarefree<R: Rng>(&self, f: &Poly, rng: &mut R) -> Vec<Poly> {
        let mut out = Vec::new();
        for (k, g) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, k, rng));
        }
        out.sort();
        out
    }
}

/// Multiset of irreducible factor degrees from a distinct-degree factorization.
pub(crate) fn degree_pattern(ddf: &[(usize, Poly)]) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, g) in ddf {
        let count = (g.len() - 1) / k;
        out.extend(std::iter::repeat_n(*k, count));
    }
    out.sort();
    out
}
