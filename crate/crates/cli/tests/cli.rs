use std::path::PathBuf;
use std::process::{Command, Output};

use sinister_core::io::{state_to_json, StateFile};
use sinister_core::{DensityMatrix, PureState};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sinister"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sinister-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn state_file(name: &str, rho: &DensityMatrix) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, state_to_json(rho)).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_bell() {
    let p = state_file("bell.json", &DensityMatrix::from_pure(&PureState::bell()).unwrap());
    let out = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["sinisterness"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["classification"], "sinister");
    for key in ["bloch", "gamma", "chirality", "purity"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn analyze_mixed() {
    let p = state_file("mixed.json", &DensityMatrix::maximally_mixed());
    let out = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sinisterness"].as_f64(), Some(0.0));
    assert_eq!(v["concurrence"].as_f64(), Some(0.0));
    assert_eq!(v["classification"], "undefined");
}

#[test]
fn analyze_rejects_bad_trace() {
    let m = DensityMatrix::maximally_mixed().matrix().scale_real(0.9);
    let p = scratch("trace.json");
    std::fs::write(&p, serde_json::to_string(&StateFile::from_matrix(&m)).unwrap()).unwrap();
    let out = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit-trace"));
}

#[test]
fn analyze_rejects_garbage() {
    let p = scratch("garbage.json");
    std::fs::write(&p, "{\"rho\": 3}").unwrap();
    assert_eq!(run(&["analyze", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn scan_writes_reproducible_csv() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for p in [&a, &b] {
        let out = run(&["scan", "--n", "2000", "--seed", "9", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&out.stdout).contains("violations"));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(text).unwrap().lines().count(), 2001);
}

#[test]
fn scan_single_row_and_json() {
    let p = scratch("one.csv");
    let out = run(&["scan", "--n", "1", "--mode", "toward-pure", "--json", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["n"], 1);
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains("toward-pure"));
}

#[test]
fn scan_unwritable_output() {
    let out = run(&["scan", "--n", "1", "--out", "/no/such/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_flags_violations() {
    // a negative tolerance turns the tightest states into violations
    let out = run(&["scan", "--n", "300", "--tolerance=-1", "--json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(json(&out)["upper_violations"].as_u64().unwrap() > 0);
}

#[test]
fn simulate_bell() {
    let p = state_file("sim.json", &DensityMatrix::from_pure(&PureState::bell()).unwrap());
    let out = run(&["simulate", p.to_str().unwrap(), "--shots", "100000", "--ladder", "1000,10000", "--repeats", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["estimate"]["sinisterness"].as_f64().unwrap() + 1.0).abs() < 0.05);
    assert_eq!(v["convergence"]["rows"].as_array().unwrap().len(), 2);
    let again = run(&["simulate", p.to_str().unwrap(), "--shots", "100000", "--ladder", "1000,10000", "--repeats", "5"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn perturb_reports() {
    let pi = state_file("pi.json", &DensityMatrix::from_pure(&PureState::bell()).unwrap());
    let out = run(&["perturb", pi.to_str().unwrap(), "--werner", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["analytic_dc"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((v["analytic_ds"].as_f64().unwrap() + 0.375).abs() < 1e-12);

    let rho = state_file("ent.json", &DensityMatrix::random_biased(11, sinister_core::SamplingMode::TowardPure));
    assert_eq!(run(&["perturb", rho.to_str().unwrap()]).status.code(), Some(0));

    let bell = pi;
    assert_eq!(run(&["perturb", bell.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn verify_passes_and_detects_fault() {
    let out = run(&["verify", "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let out = run(&["verify", "--samples", "40", "--json"]);
    let v = json(&out);
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));

    let out = run(&["verify", "--samples", "20", "--inject-fault", "g-index"]);
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("dual-path")));
}
