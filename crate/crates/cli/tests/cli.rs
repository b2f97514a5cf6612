use std::process::{Command, Output};

use dynrat::census::{CensusReport, DensityReport};
use dynrat::dynamics::{ExclusionVerdict, PeriodicReport};
use dynrat::iterates::{ClearedIterate, IterateTable};
use dynrat::newton::Stability;
use dynrat::primitive::OrbitReport;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynrat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn schema_for(def: &str) -> jsonschema::Validator {
    let root: Value = serde_json::from_str(include_str!("../../../schema/dynrat.schema.json")).unwrap();
    let schema = json!({ "$defs": root["$defs"], "$ref": format!("#/$defs/{def}") });
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Runs with `--json`, validates against the schema, deserializes into `T`
/// and checks that re-serializing reproduces the output exactly.
fn json_output<T: DeserializeOwned + Serialize>(def: &str, args: &[&str]) -> T {
    let mut args = args.to_vec();
    args.push("--json");
    let text = stdout(&args);
    let value: Value = serde_json::from_str(&text).unwrap();
    let validator = schema_for(def);
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates schema: {errors:?}");
    let parsed: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    parsed
}

#[test]
fn whole_schema_compiles() {
    let root: Value = serde_json::from_str(include_str!("../../../schema/dynrat.schema.json")).unwrap();
    jsonschema::validator_for(&root).unwrap();
}

#[test]
fn iterate_json() {
    let t: IterateTable = json_output("iterate", &["iterate", "--d", "2", "--c", "-29/16", "--n", "2"]);
    let coeffs: Vec<String> = t.coeffs.iter().map(ToString::to_string).collect();
    assert_eq!(coeffs, ["377/256", "-29/8", "1"]);
    let h: ClearedIterate = json_output("cleared", &["iterate", "--d", "2", "--c", "3", "--n", "2", "--cleared"]);
    assert_eq!(h.constant().to_string(), "12");
}

#[test]
fn stability_json_and_text() {
    let s: Stability = json_output("stability", &["stability", "--d", "2", "--c", "3"]);
    assert!(matches!(s, Stability::Stable(ref cert) if cert.p == 3.into() && cert.e == 1));
    let s: Stability = json_output("stability", &["stability", "--d", "2", "--c", "4"]);
    assert_eq!(s, Stability::Unknown);
    assert!(stdout(&["stability", "--d", "2", "--c", "3/4"]).starts_with("stable: yes (p=3, e=1)\n"));
    assert!(stdout(&["stability", "--d", "2", "--c", "4"]).starts_with("stable: unknown\n"));
}

#[test]
fn periodic_json() {
    let r: PeriodicReport = json_output("periodic", &["periodic", "--d", "2", "--c", "-29/16", "--n", "3"]);
    let cycles: Vec<Vec<String>> = r
        .cycles
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect())
        .collect();
    assert_eq!(cycles, [["-7/4", "5/4", "-1/4"]]);
    for strategy in ["window", "divisors"] {
        let s: PeriodicReport = json_output(
            "periodic",
            &["periodic", "--d", "2", "--c", "-29/16", "--n", "3", "--strategy", strategy],
        );
        assert_eq!(s, r);
    }
    let gated: PeriodicReport = json_output("periodic", &["periodic", "--d", "2", "--c", "1/2", "--n", "1"]);
    assert!(gated.u2.is_none() && gated.cycles.is_empty());
}

#[test]
fn exclude_json_and_text() {
    let v: ExclusionVerdict = json_output("exclude", &["exclude", "--d", "2", "--c1", "5", "--n", "2"]);
    assert!(v.is_impossible());
    let v: ExclusionVerdict = json_output("exclude", &["exclude", "--d", "2", "--c1", "-29", "--n", "3"]);
    assert!(!v.is_impossible());
    assert!(stdout(&["exclude", "--d", "2", "--c1", "5", "--n", "2"]).starts_with("impossible (p=5)\n"));
    assert!(stdout(&["exclude", "--d", "2", "--c1", "-29", "--n", "3"]).starts_with("inconclusive\n"));
}

#[test]
fn orbit_json() {
    let r: OrbitReport = json_output("orbit", &["orbit", "--d", "2", "--c", "-29/16", "--n", "5"]);
    assert!(r.divisibility);
    let at3: Vec<String> = r.primitive.at(3).unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(at3, ["5", "7", "23"]);
    let zero: OrbitReport = json_output("orbit", &["orbit", "--d", "2", "--c", "-1", "--n", "4"]);
    assert_eq!(zero.primitive.truncated_at, Some(2));
}

#[test]
fn census_and_density_json() {
    let r: CensusReport = json_output("census", &["census", "--d", "2", "--N", "12", "--n-max", "3"]);
    assert!(r.failures.is_empty());
    assert!(r.records.iter().any(|e| e.c.to_string() == "-3/4"));
    let alias: CensusReport = json_output("census", &["census", "--d", "2", "--height", "12", "--periods", "1,2,3"]);
    assert_eq!(alias, r);
    let dens: DensityReport = json_output("density", &["density", "--d", "2", "--N", "50"]);
    assert!(dens.reduced.sd_n <= dens.pairs.sd_n);
}

#[test]
fn repeat_runs_are_byte_identical() {
    let cases: [&[&str]; 3] = [
        &["census", "--d", "2", "--N", "15", "--json"],
        &["orbit", "--d", "3", "--c", "-7/8", "--n", "4", "--json"],
        &["periodic", "--d", "2", "--c", "-21/16", "--n", "2", "--json"],
    ];
    for args in cases {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&["periodic", "--d", "1", "--c", "1", "--n", "1"]), Some(2));
    assert_eq!(code(&["periodic", "--d", "2", "--c", "1/0", "--n", "1"]), Some(2));
    assert_eq!(code(&["periodic", "--d", "2", "--c", "abc", "--n", "1"]), Some(2));
    assert_eq!(code(&["periodic", "--d", "2", "--n", "1"]), Some(2));
    assert_eq!(code(&["exclude", "--d", "2", "--c1", "0", "--n", "2"]), Some(2));
    assert_eq!(code(&["census", "--d", "2", "--N", "0"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    assert_eq!(code(&["iterate", "--d", "2", "--c", "1", "--n", "30"]), Some(3));
    assert_eq!(code(&["iterate", "--d", "2", "--c", "1", "--n", "5", "--max-slots", "8"]), Some(3));
    assert_eq!(code(&["census", "--d", "2", "--N", "100000", "--volume-cap", "10"]), Some(3));
    // 2147483647 · 2147483629 with no rho budget cannot be split.
    let semiprime = "4611685975477714963";
    let starved = ["--trial-bound", "10", "--rho-iterations", "0"];
    let mut orbit = vec!["orbit", "--d", "2", "--c", semiprime, "--n", "1"];
    orbit.extend(starved);
    assert_eq!(code(&orbit), Some(3));
}

#[test]
fn success_exits_0() {
    assert_eq!(code(&["density", "--d", "3", "--N", "10"]), Some(0));
    assert_eq!(code(&["periodic", "--d", "2", "--c", "-2", "--n", "1"]), Some(0));
}
