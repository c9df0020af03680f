use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use twistmod::{MatrixSeries, ModuleData, TwistedStructure, UTMatrix, VerifyReport};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistmod"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> T {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_square_derivation() {
    let dir = tempfile::tempdir().unwrap();
    let v: Value = serde_json::from_str(&ok(&["classify", "--p", "s^2", "--q", "1"], dir.path())).unwrap();
    assert_eq!(v["case-1"]["admissible"], true);
    assert_eq!(v["case-1"]["alpha"], "-1");
    assert_eq!(v["case1"]["admissible"], false);
}

#[test]
fn build_writes_jordan_module() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["build", "--p", "1", "--q", "1", "--case", "1", "--n", "2", "--trunc", "8", "--out", "m.json"],
        dir.path(),
    );
    let m: ModuleData = read(&dir.path().join("m.json"));
    let expect = MatrixSeries::new(1, 0, 8, vec![UTMatrix::jordan(2), UTMatrix::identity(2)], 2).unwrap();
    assert_eq!(m.s, expect);
    // emit(parse(emit(m))) is byte-identical
    let text = std::fs::read_to_string(dir.path().join("m.json")).unwrap();
    assert_eq!(serde_json::to_string_pretty(&m).unwrap() + "\n", text);
}

#[test]
fn pipeline_build_twist_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["build", "--p", "s^2", "--q", "1", "--case", "-1", "--n", "3", "--trunc", "10", "--out", "m.json"], d);
    let report = ok(&["twist", "--module", "m.json", "--f", "s^3+1", "--out", "ts.json"], d);
    let r: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(r["g"], "sigma");
    assert_eq!(r["valuation"], -3);
    assert_eq!(r["predicate"], "deg_f_odd");
    assert_eq!(r["degree_relaxed"], false);
    let ts: TwistedStructure = read(&d.join("ts.json"));
    assert_eq!(ts.ram, 2);
    ok(&["verify", "--module", "m.json", "--structure", "ts.json", "--report", "r.json"], d);
    let rep: VerifyReport = read(&d.join("r.json"));
    assert!(rep.all_pass());
    assert!(rep.header.contains("not checked"));
}

#[test]
fn tampered_module_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["build", "--p", "1", "--q", "1", "--case", "1", "--n", "2", "--trunc", "8", "--out", "m.json"], d);
    let mut v: Value = read(&d.join("m.json"));
    v["S"]["coeffs"][1]["rows"] = serde_json::json!([["1", "0"], ["0", "2"]]);
    std::fs::write(d.join("tampered.json"), v.to_string()).unwrap();
    let out = run(&["verify", "--module", "tampered.json", "--report", "r.json"], d);
    assert_eq!(out.status.code(), Some(1));
    let rep: VerifyReport = read(&d.join("r.json"));
    let bad: Vec<_> = rep.failures().collect();
    assert!(!bad.is_empty());
    assert!(bad.iter().all(|c| c.witness.as_ref().is_some_and(|w| !w.is_zero())));
}

#[test]
fn errors_are_json_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["build", "--p", "s", "--q", "s^2", "--case", "1", "--n", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "NotCoprime");

    let out = run(&["build", "--p", "1", "--q", "1", "--case", "0", "--alpha", "0", "--n", "2"], dir.path());
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "Inadmissible");

    let out = run(&["verify", "--module", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lift_identity_and_tower_limit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["build", "--p", "1", "--q", "1", "--case", "1", "--n", "2", "--trunc", "8", "--out", "m.json"], d);
    let m: ModuleData = read(&d.join("m.json"));
    let t: MatrixSeries = serde_json::from_str(&ok(&["lift", "--module", "m.json", "--poly", "Z-s"], d)).unwrap();
    assert_eq!(t, m.s);

    // sqrt(2) is needed for f = s^3 + 2
    let out = run(&["twist", "--module", "m.json", "--f", "s^3+2", "--tower", "rat", "--out", "ts.json"], d);
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "TowerExhausted");
    ok(&["twist", "--module", "m.json", "--f", "s^3+2", "--out", "ts.json"], d);
}

#[test]
fn sweep_is_deterministic_and_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let a = ok(&["sweep", "--count", "20", "--seed", "7"], dir.path());
    let b = ok(&["sweep", "--count", "20", "--seed", "7"], dir.path());
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("case,f,predicted,computed,agree"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    let c = ok(&["sweep", "--count", "20", "--seed", "8"], dir.path());
    assert_ne!(a, c);
}
