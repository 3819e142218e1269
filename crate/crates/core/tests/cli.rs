use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-moqp"))
}

fn sample() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/illustrative.json")
}

fn solve(args: &[&str]) -> Output {
    bin().arg("solve").arg(sample()).args(["--grid", "101"]).args(args).output().unwrap()
}

fn read_csv(path: &Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("input,value"));
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn solves_sample_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = solve(&["--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let json: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let lambda = json["phase1"]["lambda_star"].as_f64().unwrap();
    assert!((lambda - 0.331).abs() < 1e-3, "{lambda}");
    assert_eq!(json["aspiration"][0]["lo"].as_f64(), Some(42.0));
    assert_eq!(json["aspiration"][0]["hi"].as_f64(), Some(228.75));
    assert_eq!(json["instance"]["n"], 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda* = 0.33"));
}

#[test]
fn reports_are_byte_identical() {
    let a = solve(&[]);
    let b = solve(&[]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn curves_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve(&["--curves", dir.path().to_str().unwrap(), "--report", dir.path().join("r.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["objective_1", "objective_2", "constraint_1", "constraint_2", "upper_1", "upper_2", "lower_1", "lower_2"] {
        let rows = read_csv(&dir.path().join(format!("{name}.csv")));
        assert_eq!(rows.len(), 401, "{name}");
        assert!(rows.windows(2).all(|w| w[0].0 < w[1].0), "{name} inputs not increasing");
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.1)), "{name}");
    }

    let z1 = read_csv(&dir.path().join("objective_1.csv"));
    let (mid_x, mid_v) = z1[200];
    assert!((mid_x - 135.375).abs() < 1e-9 && (mid_v - 0.5f64.sqrt()).abs() < 1e-9, "{:?}", z1[200]);
    assert!(z1.iter().filter(|r| r.0 <= 42.0).all(|r| r.1 == 0.0));
    assert!(z1.iter().filter(|r| r.0 >= 228.75).all(|r| r.1 == 1.0));

    let theta1 = read_csv(&dir.path().join("upper_1.csv"));
    assert_eq!(theta1[200], (9.0, 1.0));
    assert_eq!(theta1[300], (12.0, 0.0));
}

#[test]
fn oracle_only_mode() {
    let out = solve(&["--oracle-only"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["phase1"]["certification"], "oracle_only");
    assert!(json["phase1"]["bisection_lambda"].is_null());
}

#[test]
fn rejects_instance_without_objectives() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k0.json");
    let mut inst: Value = serde_json::from_str(&fs::read_to_string(sample()).unwrap()).unwrap();
    inst["k"] = 0.into();
    inst["objectives"] = Value::Array(vec![]);
    fs::write(&path, inst.to_string()).unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("k ≥ 1 required"));
}

#[test]
fn malformed_json_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"n\": 2,").unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: parse"));
}

#[test]
fn missing_file_is_an_error() {
    let out = bin().args(["solve", "/nonexistent/instance.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: read"));
}
