use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcb")).args(args).env_remove("QCB_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bound_on_maximally_entangled_preset() {
    let out = qcb(&["bound", "--tau", "maximally-entangled"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = |tag: &str| text.lines().find(|l| l.split_whitespace().next() == Some(tag)).unwrap().to_string();
    assert!(row("R").contains("2.0"));
    assert!(row("D").contains("0.5"));
}

#[test]
fn emitted_state_reloads() {
    let doc = json(&qcb(&["bound", "--tau", "werner-state:0.3", "--format", "json"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.json");
    fs::write(&path, doc["tau"].to_string()).unwrap();
    let again = json(&qcb(&["bound", "--tau", path.to_str().unwrap(), "--format", "json"]));
    assert_eq!(doc["bounds"], again["bounds"]);
}

#[test]
fn detect_at_one_half() {
    let out = qcb(&["detect", "--w", "0.5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("not entanglement breaking (both schemes)"));
    let out = qcb(&["detect", "--w", "1/3"]);
    assert!(stdout(&out).contains("inconclusive (both schemes)"));
}

#[test]
fn compare_brackets_threshold_and_is_deterministic() {
    let args = ["compare", "--pair", "UE,D", "--family", "x=1/sqrt2", "--grid", "1000"];
    let a = qcb(&args);
    let b = qcb(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("parameter,diff,sign"));
    let rows: Vec<(f64, i32)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let change = rows.windows(2).find(|w| w[0].1 != w[1].1 && w[0].1 != 0).unwrap();
    let target = 1.0 / 3f64.sqrt();
    assert!(change[0].0 <= target && target <= change[1].0);
    assert!(change[1].0 - change[0].0 <= 1e-3 + 1e-12);
}

#[test]
fn sweep_csv_threshold_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = qcb(&["detect", "--sweep", "101", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let first = text
        .lines()
        .skip(1)
        .find(|l| l.ends_with("not-eb,not-eb"))
        .and_then(|l| l.split(',').next())
        .map(|w| w.parse::<f64>().unwrap())
        .unwrap();
    assert!((first - 0.34).abs() < 1e-12);
}

#[test]
fn infeasible_achiever_exits_three() {
    let out = qcb(&["convert", "--x", "0.8", "--y", "0.3", "--achiever", "C"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn achiever_channel_reloads_and_converts() {
    let doc = json(&qcb(&["convert", "--x", "0.3", "--y", "0.8", "--achiever", "C", "--format", "json"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("achiever.json");
    fs::write(&path, doc["achiever"].to_string()).unwrap();
    let probs = json(&qcb(&["prob", "--ppovm", "entangled", "--channel", path.to_str().unwrap(), "--format", "json"]));
    let total: f64 = probs.as_array().unwrap().iter().map(|r| r["probability"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let c = doc["classes"].as_array().unwrap().iter().find(|r| r["class"] == "C").unwrap();
    assert_eq!(c["verdict"], "convertible");
}

#[test]
fn malformed_json_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"kind\": \"density\",\n \"data\": [").unwrap();
    let out = qcb(&["bound", "--tau", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    fs::write(&path, r#"{"kind": "density", "data": [[1, 0, 0, 0]]}"#).unwrap();
    let out = qcb(&["bound", "--tau", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.data"));
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(qcb(&["bound", "--tau", "product-00", "--bogus"]).status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["detect", "--w", "0.4", "--shots", "500", "--format", "csv"];
    let flag = Command::new(env!("CARGO_BIN_EXE_qcb")).args(args).args(["--seed", "9"]).output().unwrap();
    let env = Command::new(env!("CARGO_BIN_EXE_qcb")).args(args).env("QCB_SEED", "9").output().unwrap();
    let other = Command::new(env!("CARGO_BIN_EXE_qcb")).args(args).env("QCB_SEED", "10").output().unwrap();
    assert!(flag.status.success());
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn ancilla_free_success_probability() {
    let rows = json(&qcb(&["prob", "--ppovm", "ancilla-free", "--channel", "werner:0.5", "--class", "UE", "--format", "json"]));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let success: f64 =
        rows.iter().filter(|r| r["label"].as_str().unwrap().ends_with(":0")).map(|r| r["probability"].as_f64().unwrap()).sum();
    assert!((success - 0.75).abs() < 1e-12);
}

#[test]
fn oracle_witness_reloads() {
    let doc = json(&qcb(&["oracle", "--tau", "maximally-entangled", "--class", "R", "--starts", "32", "--refine", "4", "--format", "json"]));
    let row = &doc["results"][0];
    assert!((row["best_value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    fs::write(&path, row["witness"].to_string()).unwrap();
    let out = qcb(&["prob", "--ppovm", "entangled", "--channel", path.to_str().unwrap(), "--format", "json"]);
    let p = json(&out)[0]["probability"].as_f64().unwrap();
    assert!((p - 1.0).abs() < 1e-6);
}

#[test]
fn verify_small_sweep_passes() {
    let out = qcb(&["verify", "--n-tau", "10", "--n-channels", "50", "--format", "csv"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 6);
}
