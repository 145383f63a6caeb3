use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const TABLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/omega_hat_table.json");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p2betti"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn compute_six_rows_match_table() {
    let out = run(&["compute", "--dmax", "6", "--golden", TABLE]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"][3]["omega_hat"], serde_json::json!(["1", "1", "4", "4", "4", "1", "1"]));
    assert_eq!(v["pass"], Value::Bool(true));
}

#[test]
fn compute_single_row() {
    let out = run(&["compute", "--dmax", "1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "d=1\t1\n");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["compute", "--dmax", "5", "--method", "both"]);
    let b = run(&["compute", "--dmax", "5", "--method", "both"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_mirrors_json() {
    let j = json(&run(&["compute", "--dmax", "4"]));
    let c = run(&["compute", "--dmax", "4", "--format", "csv"]);
    let text = String::from_utf8(c.stdout).unwrap();
    let hat_rows: Vec<&str> = text.lines().filter(|l| l.starts_with("4,omega_hat,")).collect();
    let want: Vec<String> = j["rows"][3]["omega_hat"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("4,omega_hat,{i},{}", c.as_str().unwrap()))
        .collect();
    assert_eq!(hat_rows, want);
}

#[test]
fn corrupted_gv_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("gv.json");
    fs::write(&p, "{\n  \"surface\": \"P2\",\n  \"entries\": [ oops ]\n}\n").unwrap();
    let out = run(&["compute", "--gv", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn missing_degree_is_an_input_error() {
    let out = run(&["compute", "--dmax", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_invariants_are_invariant_violations() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("gv.json");
    // n_{0,4} off by one: Omega_4 is no longer divisible by [12]
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/gv_p2_d6.json"))
        .unwrap()
        .replace("\"-192\"", "\"-191\"");
    fs::write(&p, text).unwrap();
    let out = run(&["compute", "--gv", p.to_str().unwrap(), "--dmax", "4"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invert_six_rows_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gv = dir.path().join("gv.json");
    let out = run(&["invert", "--golden", TABLE, "--dmax", "6", "--out", gv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&gv).unwrap()).unwrap();
    let n04: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["d"] == 4)
        .map(|e| e["n"].as_str().unwrap())
        .collect();
    assert_eq!(n04, vec!["-192", "231", "-102", "15"]);
    let back = run(&["compute", "--gv", gv.to_str().unwrap(), "--dmax", "6", "--golden", TABLE]);
    assert_eq!(back.status.code(), Some(0));
}

#[test]
fn invert_ten_rows_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gv = dir.path().join("gv.json");
    assert_eq!(
        run(&["invert", "--golden", TABLE, "--out", gv.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let back = run(&["compute", "--gv", gv.to_str().unwrap(), "--dmax", "10", "--golden", TABLE]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(json(&back)["rows"][9]["omega_hat"].as_array().unwrap().len(), 73);
}

#[test]
fn invert_empty_input_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    fs::write(&p, "[]").unwrap();
    assert_eq!(run(&["invert", "--golden", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["invert"]).status.code(), Some(2));
}

#[test]
fn verify_full_suite_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["failed"], 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    for n in ["leading", "second-order", "hn-recursion-k2", "x-bound", "3d-divisibility"] {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn verify_single_check() {
    let out = run(&["verify", "--check", "leading", "--dmax", "6", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS leading d=6 below 2\n"), "{text}");
}

#[test]
fn verify_perturbed_golden_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(TABLE).unwrap()).unwrap();
    let rows = v["rows"].as_array_mut().unwrap();
    let row10 = rows.iter_mut().find(|r| r["d"] == 10).unwrap();
    let c = row10["coeffs"][5].as_str().unwrap().parse::<i64>().unwrap();
    row10["coeffs"][5] = Value::String((c + 1).to_string());
    fs::write(&p, v.to_string()).unwrap();
    let out = run(&["verify", "--golden", p.to_str().unwrap(), "--check", "leading"]);
    assert_eq!(out.status.code(), Some(1));
    let checks = json(&out)["checks"].clone();
    let bad = checks
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["d"] == 10 && c["check"] == "leading")
        .unwrap()
        .clone();
    assert_eq!(bad["pass"], false);
    assert_eq!(bad["exponent"], 5);
}

#[test]
fn verify_rejects_unknown_check() {
    assert_eq!(run(&["verify", "--check", "nonsense"]).status.code(), Some(2));
}
