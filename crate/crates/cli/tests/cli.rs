use std::process::{Command, Output};

use meanval_core::engine::MeanValueResult;
use serde_json::Value;

fn meanval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanval")).args(args).output().expect("spawn meanval")
}

fn json(args: &[&str]) -> Value {
    let out = meanval(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json payload")
}

#[test]
fn count_small_cases() {
    assert_eq!(json(&["count", "--k", "2", "--s", "3", "--X", "2"])["value"], "20");
    assert_eq!(json(&["count", "--k", "1", "--s", "1", "--X", "10"])["value"], "10");
    // s = 1: only the diagonal survives.
    assert_eq!(json(&["count", "--system", "0,1;0,0,1", "--s", "1", "--lo", "-3", "--hi", "3"])["value"], "7");
}

#[test]
fn result_round_trips() {
    let out = meanval(&["count", "--k", "2", "--s", "2", "--X", "12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let r = MeanValueResult::from_json(&text).unwrap();
    // 2X^2 - X
    assert_eq!(r.value.to_string(), "276");
    assert_eq!(r.interval, [1, 12]);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["weighted", "--k", "2", "--s", "2", "--indicator", "1", "9", "--normalize"];
    assert_eq!(meanval(&args).stdout, meanval(&args).stdout);
    let args = ["singular", "series", "--k", "2", "--s", "5", "--Q", "16"];
    assert_eq!(meanval(&args).stdout, meanval(&args).stdout);
}

#[test]
fn bounds_csv() {
    let out = meanval(&["bounds", "--d", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,theta,s0,s0_floor_plus_one,gtilde_bound"));
    assert_eq!(lines.next(), Some("10,1,482/5,97,97"));
    let v = json(&["bounds", "--d", "10", "--format", "json"]);
    assert_eq!(v[0]["gtilde_bound"], 97);
}

#[test]
fn csv_flattens_results() {
    let out = meanval(&["count", "--k", "2", "--s", "3", "--X", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let value = headers.iter().position(|h| h == "value").unwrap();
    assert_eq!(&row[value], "20");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j.json");
    let out = meanval(&["count", "--k", "2", "--s", "2", "--X", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["value"], "45");
}

#[test]
fn timing_flag() {
    assert_eq!(json(&["count", "--k", "3", "--s", "3", "--X", "10"])["elapsed_ms"], 0);
    assert!(json(&["count", "--k", "3", "--s", "3", "--X", "10", "--timing"])["elapsed_ms"].is_u64());
}

#[test]
fn exit_codes() {
    assert_eq!(meanval(&["count", "--bogus"]).status.code(), Some(2));
    assert_eq!(meanval(&["count", "--k", "2", "--s", "2"]).status.code(), Some(2));
    assert_eq!(meanval(&["weighted", "--k", "2", "--s", "2", "--weights", "/nonexistent.json"]).status.code(), Some(2));
    let out = meanval(&["count", "--k", "3", "--s", "3", "--X", "200", "--memory-cap", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
    assert_eq!(meanval(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_agrees() {
    let v = json(&["oracle", "--k", "2", "--s", "2", "--X", "7"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["engine"]["value"], v["oracle"]["value"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, r#"{"lo":1,"hi":4,"weights":[[1,0],[0,1],[2,-1],[1,1]]}"#).unwrap();
    let v = json(&["oracle", "--k", "2", "--s", "2", "--weights", path.to_str().unwrap()]);
    assert_eq!(v["agree"], true);
}

#[test]
fn tarry_round_trip() {
    let found = json(&["tarry", "search", "--k", "2", "--s", "3", "--bound", "7"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, found["witness"].to_string()).unwrap();
    assert_eq!(json(&["tarry", "verify", path.to_str().unwrap()])["valid"], true);
    std::fs::write(&path, r#"{"k":2,"columns":[[1,2,3],[1,2,4]]}"#).unwrap();
    assert_eq!(json(&["tarry", "verify", path.to_str().unwrap()])["valid"], false);
}

#[test]
fn congruence_and_interval() {
    let v = json(&["congruence", "--k", "2", "--s", "2", "--p", "5", "--B", "2", "--indicator", "1", "25"]);
    assert_eq!(v["kind"], "U_B");
    assert!(v["value"].is_string());
    let v = json(&["interval", "--k", "2", "--p", "7", "--B", "3", "--X", "1", "--Y", "8", "--s", "2"]);
    assert_eq!(v["window"], 8);
    // p = 2 does not exceed k
    assert_eq!(meanval(&["congruence", "--k", "2", "--s", "2", "--p", "2", "--B", "2", "--indicator", "1", "4"]).status.code(), Some(2));
}

#[test]
fn function_field_counts() {
    // s = 1 leaves only the diagonal, |O_d| = q^{d+1} solutions.
    assert_eq!(json(&["ff", "--q", "9", "--k", "2", "--d", "0", "--s", "1"])["value"], "9");
    assert_eq!(json(&["ff", "--q", "9", "--k", "2", "--d", "1", "--s", "1"])["value"], "81");
    let v = json(&["ff", "--q", "3", "--k", "1", "--s", "1", "--system", "0:0,1", "--d", "2"]);
    assert_eq!(v["value"], "27");
}

#[test]
fn fit_slope() {
    let v = json(&["fit", "--k", "2", "--s", "2", "--X-list", "10,20,40,80"]);
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - 2.021_324_49).abs() < 1e-6, "{slope}");
}
