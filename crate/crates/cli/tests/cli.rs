use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ordcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordcolor"))
        .args(args)
        .env_remove("ORDCOLOR_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const COVERAGE: &str = r#"{"pipeline":"e3-compose","magma":"free-abelian","generators":16,
"sample_size":8,"arity":3,"colors":4,"trials":2,"seed":5}"#;

#[test]
fn walk_reports_trace_and_characteristics() {
    let out = ordcolor(&["walk", "3", "w^2+1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["trace"], serde_json::json!(["w^2 + 1", "w^2", "w"]));
    assert_eq!(v["rho2"], 3);
    assert_eq!(v["lambda2"], "2");
}

#[test]
fn walk_requires_alpha_below_beta() {
    assert_eq!(ordcolor(&["walk", "w", "3"]).status.code(), Some(2));
}

#[test]
fn malformed_ordinal_is_a_usage_error() {
    assert_eq!(ordcolor(&["walk", "w^", "3"]).status.code(), Some(2));
}

#[test]
fn osc_and_chi_emit_json() {
    let osc = ordcolor(&["osc", "w", "w^2", "--eps", "0"]);
    assert_eq!(osc.status.code(), Some(0));
    assert_eq!(json(&osc)["count"], 1);
    let chi = ordcolor(&["chi", "1", "w", "w^2"]);
    assert_eq!(chi.status.code(), Some(0));
    assert!(json(&chi)["chi"].is_u64());
}

#[test]
fn extract_and_color3_read_a_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let fam = write(dir.path(), "fam.json", r#"["0010","0101","0110","1000","1011"]"#);
    let out = ordcolor(&["extract", "e3", "--family", &fam, "--z", "0,2,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["extracted"].as_array().unwrap().len(), 3);

    let out = ordcolor(&["color3", "--family", &fam, "--variant", "ch", "2", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["triple"], serde_json::json!(["0", "1", "2"]));
    assert!(v["case"].is_string());
}

#[test]
fn color3_needs_a_family() {
    assert_eq!(ordcolor(&["color3", "0", "1", "2"]).status.code(), Some(2));
}

#[test]
fn coverage_writes_a_verifiable_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", COVERAGE);
    let out_path = dir.path().join("report.json");
    let out = ordcolor(&["coverage", "--config", &cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = ordcolor::harness::report_read(&out_path).unwrap();
    assert_eq!(report.trials.len(), 2);
    assert!(ordcolor::harness::verify_report(&report).unwrap());
}

#[test]
fn coverage_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", COVERAGE);
    let a = ordcolor(&["coverage", "--config", &cfg]);
    let b = ordcolor(&["coverage", "--config", &cfg]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn coverage_csv_has_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", COVERAGE);
    let out = ordcolor(&["coverage", "--config", &cfg, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("trial,seed,color,attained,witness\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 4);
}

#[test]
fn seed_env_var_overrides_the_configured_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", COVERAGE);
    let out = Command::new(env!("CARGO_BIN_EXE_ordcolor"))
        .args(["coverage", "--config", &cfg])
        .env("ORDCOLOR_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["seed"], 9);
}

#[test]
fn csv_is_refused_outside_coverage() {
    assert_eq!(ordcolor(&["walk", "1", "w", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn invariant_suite_passes_with_exit_zero() {
    let out = ordcolor(&["invariants", "--suite", "landing", "--budget", "40", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);
}

#[test]
fn unknown_suite_and_missing_config_exit_two() {
    assert_eq!(ordcolor(&["invariants", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(ordcolor(&["coverage", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(ordcolor(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tampered_report_witness_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", COVERAGE);
    let out = ordcolor(&["coverage", "--config", &cfg]);
    let mut report: ordcolor::harness::CoverageReport = serde_json::from_slice(&out.stdout).unwrap();
    let w = &mut report.trials[0].witnesses[0];
    w.color = (w.color + 1) % report.config.colors;
    assert!(!ordcolor::harness::verify_report(&report).unwrap());
}
