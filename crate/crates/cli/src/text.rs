//! Plain-text renderings of the JSON reports.

use std::fmt::Write;

use dynrat::census::{CensusReport, DensityReport, HeightCount};
use dynrat::dynamics::{Checks, ExclusionOutcome, ExclusionVerdict, PeriodicReport};
use dynrat::iterates::{ClearedIterate, IterateTable};
use dynrat::newton::Stability;
use dynrat::primitive::OrbitReport;
use dynrat::{BigInt, BigRat};

/// `coeffs[i]` multiplies `x^{i·d}`; zero terms are skipped.
fn polynomial<T: ToString>(coeffs: &[T], d: u32, is_zero: impl Fn(&T) -> bool) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !is_zero(c))
        .map(|(i, c)| match i * d as usize {
            0 => c.to_string(),
            1 => format!("({})·x", c.to_string()),
            e => format!("({})·x^{e}", c.to_string()),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn iterate(t: &IterateTable) -> String {
    format!(
        "f^{}(x) for x^{} + {}:\n{}\n",
        t.n,
        t.d,
        t.c,
        polynomial(&t.coeffs, t.d, BigRat::is_zero)
    )
}

pub fn cleared(h: &ClearedIterate) -> String {
    format!(
        "H_{}(x) for x^{} + {}/{}:\n{}\n",
        h.n,
        h.d,
        h.c1,
        h.c2,
        polynomial(&h.f, h.d, |x| *x == BigInt::default())
    )
}

pub fn stability(v: &Stability, base_irreducible: bool) -> String {
    let head = match v {
        Stability::Stable(cert) => format!("stable: yes (p={}, e={})", cert.p, cert.e),
        Stability::Unknown => "stable: unknown".into(),
    };
    format!(
        "{head}\nbase irreducible: {}\n",
        if base_irreducible { "yes" } else { "no" }
    )
}

fn checks(out: &mut String, checks: &Checks) {
    for (name, outcome) in checks {
        let label = serde_json::to_value(outcome).expect("outcome serializes");
        writeln!(out, "  {name}: {}", label.as_str().unwrap_or_default()).unwrap();
    }
}

pub fn periodic(r: &PeriodicReport) -> String {
    let mut out = String::new();
    match &r.u2 {
        None => writeln!(out, "denominator of {} is not a {}-th power: no rational periodic points", r.c, r.d).unwrap(),
        Some(_) if r.cycles.is_empty() => {
            writeln!(out, "no rational points of exact period {} for x^{} + {}", r.n, r.d, r.c).unwrap()
        }
        Some(_) => {
            writeln!(out, "{} cycle(s) of exact period {} for x^{} + {}:", r.cycles.len(), r.n, r.d, r.c).unwrap();
            for cycle in &r.cycles {
                let pts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
                writeln!(out, "  {}", pts.join(" -> ")).unwrap();
            }
            writeln!(out, "checks:").unwrap();
            checks(&mut out, &r.checks);
        }
    }
    out
}

pub fn exclusion(v: &ExclusionVerdict) -> String {
    let mut out = match &v.outcome {
        ExclusionOutcome::Impossible { p } => format!("impossible (p={p})\n"),
        ExclusionOutcome::Inconclusive => "inconclusive\n".to_string(),
    };
    writeln!(out, "m = d^n - 1 = {}{}", v.m, if v.m_is_prime { " (prime)" } else { "" }).unwrap();
    for t in &v.trace {
        writeln!(out, "  p={}: gcd(p, m)={}, gcd(p-1, m)={}", t.p, t.gcd_p, t.gcd_p_minus_1).unwrap();
    }
    if let Some(note) = &v.note {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn orbit(r: &OrbitReport) -> String {
    let mut out = String::new();
    for (i, (term, fac)) in r.orbit.terms.iter().zip(&r.orbit.factorizations).enumerate() {
        let k = i + 1;
        let factored = match fac {
            None => "0".to_string(),
            Some(f) => {
                let mut parts: Vec<String> = f
                    .factors
                    .iter()
                    .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                    .collect();
                if f.sign < 0 {
                    parts.insert(0, "-1".into());
                }
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("·")
                }
            }
        };
        let prim = r
            .primitive
            .at(k)
            .map(|ps| ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
            .unwrap_or_default();
        writeln!(out, "F_0^{k} = {term} = {factored}   primitive: {{{prim}}}").unwrap();
    }
    if let Some(z) = r.primitive.truncated_at {
        writeln!(out, "0 is periodic; analysis stops at index {z}").unwrap();
    }
    writeln!(out, "divisibility sequence: {}", if r.divisibility { "yes" } else { "no" }).unwrap();
    out
}

pub fn census(r: &CensusReport) -> String {
    let mut out = String::new();
    let c = &r.counts;
    let periods: Vec<String> = r.periods.iter().map(ToString::to_string).collect();
    writeln!(out, "d = {}, N = {}, periods {}", r.d, r.n, periods.join(",")).unwrap();
    writeln!(out, "S(N)            {}", c.s_n).unwrap();
    writeln!(out, "S_d(N) reduced  {}", c.s_d_reduced).unwrap();
    writeln!(out, "S_d(N) pairs    {}", c.s_d_pairs).unwrap();
    writeln!(out, "P_d(N)          {}", c.p_d_n).unwrap();
    writeln!(out, "ratio reduced   {:.6}", r.ratio_reduced).unwrap();
    writeln!(out, "ratio pairs     {:.6}", r.ratio_pairs).unwrap();
    writeln!(out, "predicted       {:.6}", r.predicted).unwrap();
    writeln!(out, "periodic ratio  {:.6}", r.periodic_ratio).unwrap();
    for e in &r.records {
        for cycle in &e.cycles {
            let pts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
            writeln!(out, "  c = {}, n = {}: {}", e.c, e.n, pts.join(" -> ")).unwrap();
        }
    }
    for f in &r.failures {
        writeln!(out, "  c = {}, n = {}: failed: {}", f.c, f.n, f.error).unwrap();
    }
    out
}

fn height_row(h: &HeightCount) -> String {
    format!(
        "{:<8} {:>14} {:>14} {:>10.6} {:>10.6}\n",
        serde_json::to_value(h.variant).expect("variant serializes").as_str().unwrap_or_default(),
        h.s_n,
        h.sd_n,
        h.ratio,
        h.predicted
    )
}

pub fn density(r: &DensityReport) -> String {
    format!(
        "d = {}, N = {}\n{:<8} {:>14} {:>14} {:>10} {:>10}\n{}{}",
        r.reduced.d,
        r.reduced.n,
        "variant",
        "S(N)",
        "S_d(N)",
        "ratio",
        "predicted",
        height_row(&r.reduced),
        height_row(&r.pairs)
    )
}
