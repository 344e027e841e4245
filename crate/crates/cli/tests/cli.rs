use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shootout"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn missing_model_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.toml");
    let o = run(&["table3", "--model", missing.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.toml"));
}

#[test]
fn errors_as_json_on_request() {
    let o = run(&["replay", "catchup", "SQ", "--error-json"]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "engine");
    assert_eq!(v["error"]["exit_code"], 3);
}

#[test]
fn bad_model_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m.toml");
    fs::write(&cfg, "mode = \"uniform\"\np = \"3/4\"\nq = \"5/4\"\n").unwrap();
    let o = run(&["table3", "--model", cfg.to_str().unwrap()]);
    assert_ne!(code(&o), 0);
    assert!(!o.stderr.is_empty());
}

#[test]
fn table3_matches_published_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["table3", "--check", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("table3.csv"));
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0][1], "catchup");
    assert_eq!(rows[0][3], "10/19");

    let m = read_json(&dir.path().join("table3.csv.manifest.json"));
    assert_eq!(m["outputs"][0], "table3.csv");
    assert_eq!(m["arithmetic"], "exact-rational");
    assert!(m["config_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(m["command"][0], "table3");
}

#[test]
fn equal_skills_give_a_flat_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("even.toml");
    fs::write(&cfg, "mode = \"uniform\"\np = 0.7\nq = 0.7\n").unwrap();
    let o = run(&[
        "table3",
        "--model",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    for row in csv_rows(&dir.path().join("table3.csv")) {
        assert_eq!(row[3], "1/2");
    }
}

#[test]
fn check_without_reference_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("even.toml");
    fs::write(&cfg, "mode = \"uniform\"\np = 0.7\nq = 0.7\n").unwrap();
    let o = run(&["table3", "--check", "--model", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn simulation_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "simulate", "catchup", "--seed", "11", "--trials", "100000", "--format", "json", "--out",
        out,
    ];
    let file = dir.path().join("simulate.json");
    assert_eq!(code(&run(&args)), 0);
    let first = fs::read(&file).unwrap();
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(first, fs::read(&file).unwrap());

    let v = read_json(&file);
    assert_eq!(v["manifest"]["seeds"][0], 11);
    assert_eq!(v["data"]["trials"], 100_000);
}

#[test]
fn empty_q_range_writes_no_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep",
        "--p",
        "3/4",
        "--q-from",
        "0.8",
        "--mechanism",
        "abba",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(csv_rows(&dir.path().join("sweep_abba.csv")).is_empty());
}

#[test]
fn sweep_ends_at_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep",
        "--p",
        "0.7",
        "--check",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in [
        "sweep_catchup.csv",
        "sweep_adj-catchup.csv",
        "sweep_abba.csv",
    ] {
        let rows = csv_rows(&dir.path().join(name));
        assert_eq!(rows.len(), 21);
        let last = rows.last().unwrap();
        assert_eq!((last[1].as_str(), last[3].as_str()), ("7/10", "1/2"));
    }
}

#[test]
fn replay_reproduces_worked_example() {
    let o = run(&["replay", "adj-catchup", "SS.MM.SS.MS.SM.SS.SM", "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let firsts: String = stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(firsts, "ABABBBA");
}

#[test]
fn alternating_needs_one_question() {
    let o = run(&["complexity", "abba", "--format", "json", "--check"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"][0]["Found"]["worst_case_depth"], 1);
}

#[test]
fn region_writes_thresholds_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["region", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let t = csv_rows(&dir.path().join("thresholds.csv"));
    assert_eq!(t[0][0], "catchup");
    let alpha: f64 = t[0][1].parse().unwrap();
    assert!((alpha - 0.6569).abs() < 5e-4);
    assert_eq!(csv_rows(&dir.path().join("region.csv")).len(), 51);
}

#[test]
fn strategy_report_lists_violations() {
    let o = run(&[
        "strategy",
        "adj-catchup",
        "--p",
        "0.99",
        "--q",
        "0.01",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"]["strategy_proof"], false);
    assert!(v["data"]["violations"][0]["state"]["history"].is_string());
}

#[test]
fn seed_is_rejected_where_unused() {
    assert_eq!(code(&run(&["table3", "--seed", "3"])), 2);
}
