use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stabtherm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabtherm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--quiet", "--json", "-"]);
    let out = stabtherm(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn critical_beta_of_square_ising() {
    let v = json(&["critical-beta", "builtin:ising:2:8"]);
    assert_eq!(v["beta_star_finite"], Value::Bool(true));
    assert!((f(&v["inverse_beta_star"]) - 248.8398).abs() < 1e-3);
}

#[test]
fn isolated_sites_have_infinite_critical_beta() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fields.stab");
    std::fs::write(&path, "qubits 2\nterm 1 ZI\nterm 1 IZ\n").unwrap();
    let v = json(&["critical-beta", path.to_str().unwrap()]);
    assert_eq!(v["beta_star"], Value::Null);
    assert_eq!(v["beta_star_finite"], Value::Bool(false));
}

#[test]
fn toric_barrier_reports_measured_penalty() {
    let v = json(&["barrier", "builtin:toric:2", "--ordering", "builtin:toric-zx", "--beta", "1"]);
    assert_eq!(v["max_penalty"], Value::String("8".into()));
    assert_eq!(v["exact"], Value::Bool(true));
    assert_eq!(v["evaluated"], Value::from(65536));
    assert_eq!(v["gap_lower_bound"]["formula"], Value::String("eq5".into()));
}

#[test]
fn sampled_barrier_is_flagged_inexact() {
    let v = json(&[
        "barrier", "builtin:toric:2", "--ordering", "builtin:lex-zx", "--samples", "500", "--seed", "7",
    ]);
    assert_eq!(v["exact"], Value::Bool(false));
    assert_eq!(v["mode"], Value::String("sampled".into()));
}

#[test]
fn verify_chain_passes() {
    let out = stabtherm(&["verify", "builtin:ising:1:3:open", "--beta", "0.2", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("all checks passed"));
}

#[test]
fn gap_matches_between_methods() {
    let a = json(&["gap", "builtin:ising:1:3:open", "--beta", "0.7", "--generator", "heatbath"]);
    let b = json(&[
        "gap", "builtin:ising:1:3:open", "--beta", "0.7", "--generator", "heatbath", "--method", "coset",
    ]);
    assert!((f(&a["gap"]) - f(&b["gap"])).abs() < 1e-9);
}

#[test]
fn build_then_validate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toric.stab");
    let p = path.to_str().unwrap();
    let out = stabtherm(&["build", "toric", "--L", "3", "-o", p]);
    assert!(out.status.success());
    let built = json(&["validate", p]);
    let builtin = json(&["validate", "builtin:toric:3"]);
    assert_eq!(built["model"]["sha256"], builtin["model"]["sha256"]);
    assert_eq!(built["model"]["qubits"], Value::from(18));
}

#[test]
fn custom_rates_file() {
    let dir = tempfile::tempdir().unwrap();
    let rates = dir.path().join("rates.txt");
    // KMS-consistent pair for ω = ±2 at β = ln(9)/2.
    let (hp, hm) = (0.9f64, 0.1f64);
    std::fs::write(&rates, format!("# single qubit\n2 {hp}\n0 0.5\n-2 {hm}\n")).unwrap();
    let model = dir.path().join("z.stab");
    std::fs::write(&model, "qubits 1\nterm 1 Z\n").unwrap();
    let beta = (hp / hm).ln() / 2.0;
    let out = stabtherm(&[
        "gap", model.to_str().unwrap(), "--beta", &beta.to_string(), "--rates", rates.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    assert_eq!(stabtherm(&["--help"]).status.code(), Some(0));
    assert_eq!(stabtherm(&["--version"]).status.code(), Some(0));
    assert_eq!(stabtherm(&["gap", "builtin:toric:2"]).status.code(), Some(64));
    assert_eq!(stabtherm(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(stabtherm(&["validate", "/definitely/not/here.stab"]).status.code(), Some(1));
    assert_eq!(stabtherm(&["validate", "builtin:klein:3"]).status.code(), Some(1));
    assert_eq!(stabtherm(&["high-temp", "builtin:toric:2", "--beta=-1"]).status.code(), Some(1));
    // 50 qubits: the dense generator does not fit.
    let out = stabtherm(&["gap", "builtin:toric:5", "--beta", "1", "--method", "dense"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_model_file_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.stab");
    std::fs::write(&path, "qubits 2\nterm 1 ZQ\n").unwrap();
    let out = stabtherm(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn json_output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = stabtherm(&[
            "verify", "builtin:ising:1:2:open", "--beta", "0.3", "--samples", "10", "--quiet", "--json",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(Path::new(&path)).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
