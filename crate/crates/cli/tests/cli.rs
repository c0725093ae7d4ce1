use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn deligne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deligne")).args(args).output().expect("spawn deligne")
}

fn run(name: &str, extra: &[&str]) -> Output {
    let path = scenario(name);
    let mut args = vec!["--scenario", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    deligne(&args)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn temp_scenario(tag: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("deligne-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn monopole_equator_is_one_half() {
    let out = run("holonomy_monopole.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    let check = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "expected").unwrap();
    assert_eq!(check["expected"], "1/2");
    let angle: f64 = check["value"].as_str().unwrap().parse().unwrap();
    assert!((angle - 0.5).abs() < 1e-6);
}

#[test]
fn torus_dw_counts_commuting_triples() {
    let out = run("dw_torus_z3.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    let invariant = checks.iter().find(|c| c["name"] == "invariant").unwrap();
    assert_eq!(invariant["value"], "9");
    assert!(checks.iter().any(|c| c["name"] == "brute-force" && c["value"] == "9"));
}

#[test]
fn csv_report_has_header_and_rows() {
    let out = run("triple_cyclic.json", &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("task,check,passed,value,expected,deviation,tolerance"));
    let rows: Vec<_> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.starts_with("triple,") && r.contains(",true,")));
}

#[test]
fn failed_check_exits_with_two() {
    let out = run("suite_negative.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn malformed_scenario_exits_with_one() {
    let path = temp_scenario("malformed", r#"{"task": {"kind": "holonomy", "cycle": }"#);
    let out = deligne(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_suite_exits_with_one() {
    let path = temp_scenario("unknown-suite", r#"{"task": {"kind": "suite", "names": ["nope"]}}"#);
    let out = deligne(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn schema_errors_point_at_the_value() {
    let path = temp_scenario(
        "schema",
        r#"{"task": {"kind": "dw", "triangulation": {"type": "torus", "dim": "three", "n": 1}, "model": {"group": {"type": "cyclic", "n": 3}, "cocycle": {"type": "trivial"}}}}"#,
    );
    let out = deligne(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("column") && err.contains("\"three\""), "{err}");
}

#[test]
fn invalid_tolerance_is_rejected() {
    let out = run("holonomy_monopole.json", &["--tolerance=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(deligne(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(deligne(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_file_matches_stdout() {
    let dest = std::env::temp_dir().join(format!("deligne-cli-{}-out.json", std::process::id()));
    let written = run("triple_cyclic.json", &["--out", dest.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    let printed = run("triple_cyclic.json", &[]);
    assert_eq!(std::fs::read(&dest).unwrap(), printed.stdout);
}
