//! Newton polygons at a prime, the Eisenstein–Dumas criterion, irreducibility
//! of `x^d + c`, and stability certificates for all iterates.

mod modp;
mod oracle;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{
    factor_with, int_valuation, is_prime, is_pth_power_rational, BigRat, FactorBudget,
};
use crate::error::{Error, Result};
use crate::iterates::check_degree;

pub use oracle::{irreducibility_oracle, irreducibility_oracle_with, Irreducibility, OracleConfig};

/// Lower convex hull of the points `(i, ν_p(a_i))` over nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub p: BigInt,
    /// `(index, valuation)` for every nonzero coefficient, by index.
    pub points: Vec<(usize, i64)>,
    /// Hull corners left to right; consecutive slopes strictly increase.
    pub vertices: Vec<(usize, i64)>,
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

impl NewtonPolygon {
    /// Slopes of consecutive edges as reduced `(rise, run)` pairs.
    pub fn slopes(&self) -> Vec<(i64, i64)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let run = (w[1].0 - w[0].0) as i64;
                let rise = w[1].1 - w[0].1;
                let g = rise.gcd(&run);
                (rise / g, run / g)
            })
            .collect()
    }

    /// Every lattice point on the hull, including those interior to edges.
    pub fn lattice_vertices(&self) -> Vec<(usize, i64)> {
        let mut out = vec![self.vertices[0]];
        for w in self.vertices.windows(2) {
            let run = (w[1].0 - w[0].0) as i64;
            let rise = w[1].1 - w[0].1;
            let steps = rise.gcd(&run);
            for k in 1..=steps {
                out.push((
                    w[0].0 + (run / steps * k) as usize,
                    w[0].1 + rise / steps * k,
                ));
            }
        }
        out
    }

    /// True if no point lies strictly below the hull.
    pub fn contains_all_points(&self) -> bool {
        self.points.iter().all(|&pt| {
            self.vertices.windows(2).all(|w| {
                if pt.0 < w[0].0 || pt.0 > w[1].0 {
                    return true;
                }
                cross(w[0], w[1], pt) >= 0
            })
        })
    }
}

/// Newton polygon of `Σ coeffs[i] x^i` at the prime `p`.
pub fn newton_polygon(coeffs: &[BigInt], p: &BigInt) -> Result<NewtonPolygon> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let points: Vec<(usize, i64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, int_valuation(p, c) as i64))
        .collect();
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "Newton polygon needs at least two nonzero coefficients".into(),
        ));
    }
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon {
        p: p.clone(),
        points,
        vertices: hull,
    })
}

/// Eisenstein–Dumas: the hull is the single segment `(0, m) → (k, 0)` with
/// `m > 0` and `gcd(k, m) = 1`. A `true` answer proves irreducibility over Q.
pub fn eisenstein_dumas(coeffs: &[BigInt], p: &BigInt) -> Result<bool> {
    let (first, last) = match (coeffs.first(), coeffs.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter("empty polynomial".into())),
    };
    if first.is_zero() || last.is_zero() {
        return Err(Error::InvalidParameter(
            "Eisenstein–Dumas needs nonzero constant and leading coefficients".into(),
        ));
    }
    let poly = newton_polygon(coeffs, p)?;
    let k = coeffs.len() - 1;
    Ok(match poly.vertices.as_slice() {
        [(0, m), (end, 0)] => *end == k && *m > 0 && (*m as u64).gcd(&(k as u64)) == 1,
        _ => false,
    })
}

/// Irreducibility of `x^d + c` over Q: for every prime `q | d`, `-c` is not a
/// `q`-th power, and if `4 | d`, `c` is not of the form `4·y^4`.
pub fn base_irreducibility(d: u32, c: &BigRat) -> Result<bool> {
    check_degree(d)?;
    if c.is_zero() {
        return Err(Error::InvalidParameter("c must be nonzero".into()));
    }
    let minus_c = -c.clone();
    let mut rest = d;
    let mut q = 2;
    while rest > 1 {
        if rest % q == 0 {
            if is_pth_power_rational(&minus_c, q) {
                return Ok(false);
            }
            while rest % q == 0 {
                rest /= q;
            }
        }
        q += 1;
    }
    if d % 4 == 0 {
        let quarter = BigRat::new(c.numer().clone(), c.denom() * 4)?;
        if !quarter.is_negative() && is_pth_power_rational(&quarter, 4) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A prime `p | c1` with `gcd(ν_p(c1), d) = 1`, certifying that every iterate
/// of `x^d + c1/c2` is irreducible over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityCertificate {
    pub p: BigInt,
    pub e: u32,
}

/// Outcome of the stability check. Absence of a certificate is reported as
/// `Unknown`, never as unstable: the criterion only works in one direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable(StabilityCertificate),
    Unknown,
}

impl Serialize for Stability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Stability::Stable(cert) => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("stable", &true)?;
                m.serialize_entry("p", &cert.p.to_string())?;
                m.serialize_entry("e", &cert.e)?;
                m.end()
            }
            Stability::Unknown => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("stable", "unknown")?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Stability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            stable: serde_json_like::BoolOrString,
            p: Option<String>,
            e: Option<u32>,
        }
        let raw = Raw::deserialize(d)?;
        match raw.stable {
            serde_json_like::BoolOrString::Bool(true) => {
                let p = raw
                    .p
                    .ok_or_else(|| D::Error::missing_field("p"))?
                    .parse()
                    .map_err(D::Error::custom)?;
                let e = raw.e.ok_or_else(|| D::Error::missing_field("e"))?;
                Ok(Stability::Stable(StabilityCertificate { p, e }))
            }
            serde_json_like::BoolOrString::Str(s) if s == "unknown" => Ok(Stability::Unknown),
            _ => Err(D::Error::custom("\"stable\" must be true or \"unknown\"")),
        }
    }
}

mod serde_json_like {
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum BoolOrString {
        Bool(bool),
        Str(String),
    }
}

impl Stability {
    pub fn certificate(&self) -> Option<&StabilityCertificate> {
        match self {
            Stability::Stable(c) => Some(c),
            Stability::Unknown => None,
        }
    }
}

pub fn stability_certificate(d: u32, c: &BigRat) -> Result<Option<StabilityCertificate>> {
    stability_certificate_with(d, c, &FactorBudget::default())
}

pub fn stability_certificate_with(
    d: u32,
    c: &BigRat,
    budget: &FactorBudget,
) -> Result<Option<StabilityCertificate>> {
    check_degree(d)?;
    if c.is_zero() {
        return Err(Error::InvalidParameter("c must be nonzero".into()));
    }
    let fac = factor_with(&c.numer().abs(), budget);
    // Primes come out ascending, so the first hit is the smallest; an
    // unfinished cofactor only matters if no certified prime qualifies.
    for (p, e) in &fac.factors {
        if (*e as u64).gcd(&(d as u64)) == 1 {
            return Ok(Some(StabilityCertificate { p: p.clone(), e: *e }));
        }
    }
    if !fac.complete {
        return Err(Error::IncompleteFactorization {
            value: c.numer().clone(),
            cofactor: fac.cofactor,
        });
    }
    Ok(None)
}

pub fn stability(d: u32, c: &BigRat) -> Result<Stability> {
    Ok(match stability_certificate(d, c)? {
        Some(cert) => Stability::Stable(cert),
        None => Stability::Unknown,
    })
}

/// Orders hull points by index, used when comparing polygons.
pub fn compare_vertices(a: &(usize, i64), b: &(usize, i64)) -> Ordering {
    a.0.cmp(&b.0).then(a.1.cmp(&b.1))
}
