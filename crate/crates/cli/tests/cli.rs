use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loewylab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let doc = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), doc)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loewylab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn invariants_of_destefani_ring() {
    let (code, doc) = json(&["invariants", "corpus:E2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["regularity"], 6);
    assert_eq!(doc["gll"]["value"], 6);
    assert_eq!(doc["gll"]["certified"], false);
    assert_eq!(doc["maxord"], 3);
    assert_eq!(doc["t_mark_bound"], 4);
    assert_eq!(doc["strict_cm"], false);
}

#[test]
fn certify_and_reverify_from_file() {
    let path = scratch("e3n2.json");
    let p = path.to_str().unwrap();
    let (code, doc) = json(&["certify", "corpus:E3n2", "--depth", "3", "--verify", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(doc["outcome"]["outcome"], "success");
    assert_eq!(doc["outcome"]["n"], 3);
    assert_eq!(doc["verified"]["bound"], 4);

    let (code, doc) = json(&["certify", "--certificate", p]);
    assert_eq!(code, 0);
    assert_eq!(doc["valid"], true);

    let text = std::fs::read_to_string(&path).unwrap();
    let mut cert: Value = serde_json::from_str(&text).unwrap();
    cert["n"] = Value::from(4);
    let forged = scratch("forged.json");
    std::fs::write(&forged, cert.to_string()).unwrap();
    let (code, doc) = json(&["certify", "--certificate", forged.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(doc["valid"], false);
}

#[test]
fn certify_failure_is_reported() {
    let (code, doc) = json(&["certify", "corpus:E2", "--target-n", "6"]);
    assert_eq!(code, 1);
    assert_eq!(doc["outcome"]["outcome"], "failure");
    assert_eq!(doc["outcome"]["step"], 0);
}

#[test]
fn oracle_on_truncated_line() {
    let (code, doc) = json(&["oracle", "corpus:E1", "--max-degree", "8"]);
    assert_eq!(code, 0);
    assert_eq!(doc["ok"], true);
    assert_eq!(doc["mismatches"], 0);
}

#[test]
fn verify_reports_module_checks() {
    let (code, doc) = json(&["verify", "corpus:H1", "--modules", "12", "--samples", "20"]);
    assert_eq!(code, 0);
    let modules = doc["modules"].as_array().unwrap();
    assert_eq!(modules.len(), 12);
    assert!(modules.iter().all(|m| m["checks"]["reg_plus_one"] == true));
    assert_eq!(doc["certificate"]["ok"], true);
}

#[test]
fn ring_files_and_characteristic_override() {
    let path = scratch("cusp.ring");
    std::fs::write(&path, "ring { vars = [x, y]; ideal = [\"x^2 - y^3\"] }\n").unwrap();
    let (code, doc) = json(&["regularity", path.to_str().unwrap(), "--char", "101"]);
    assert_eq!(code, 0);
    assert_eq!(doc["regularity"], 1);
    assert_eq!(doc["dim"], 1);
    let (_, doc) = json(&["gll", path.to_str().unwrap(), "--samples", "10"]);
    assert_eq!(doc["value"], 2);
}

#[test]
fn seed_determines_output() {
    let a = run(&["gll", "corpus:E2", "--seed", "9", "--samples", "20", "--json"]);
    let b = run(&["gll", "corpus:E2", "--seed", "9", "--samples", "20", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["invariants", "corpus:E42"]).status.code(), Some(64));
    assert_eq!(run(&["invariants", "/nonexistent/ring"]).status.code(), Some(64));
    assert_eq!(run(&["gll", "corpus:E1", "--samples", "0"]).status.code(), Some(64));
    assert_eq!(run(&["invariants", "corpus:E1", "--char", "100"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_is_a_computation_error() {
    let (code, doc) = json(&["gll", "corpus:E3n3", "--time-budget", "0"]);
    assert_eq!(code, 1);
    assert!(doc["error"].as_str().unwrap().contains("time budget"));
}

#[test]
fn corpus_listing() {
    let (code, doc) = json(&["corpus"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = doc["rings"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    for id in ["E1", "E2", "E3n2", "E3n3", "E4", "E5", "E6"] {
        assert!(ids.contains(&id));
    }
}
