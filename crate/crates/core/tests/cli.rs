use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wick(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wick"))
        .args(args)
        .env_remove("WICK_DENSE_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write_model(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const NEGATIVE_FLIP: &str = r#"{"d":2,"entries":[
  {"i":1,"j":1,"k":1,"l":1,"re":-2,"im":0},{"i":2,"j":2,"k":2,"l":2,"re":-2,"im":0},
  {"i":1,"j":2,"k":1,"l":2,"re":-2,"im":0},{"i":2,"j":1,"k":2,"l":1,"re":-2,"im":0}]}"#;

#[test]
fn passing_run_exits_zero_with_json_report() {
    let out = wick(&["check-model", "--quon", "--d", "2", "--q", "0.5", "--lambda", "i", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"]["command"], "check-model");
    assert_eq!(v["command"]["model"]["d"], 2);
    let items = v["items"].as_array().unwrap();
    assert!(!items.is_empty());
    assert!(items.iter().all(|i| i["verdict"] == "pass"));
    assert!(v.get("elapsed_ms").is_none_or(Value::is_null));
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "neg.json", NEGATIVE_FLIP);
    let out = wick(&["fock", "--file", &file, "--n", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["items"].as_array().unwrap().iter().any(|i| i["verdict"] == "fail"));
}

#[test]
fn unresolved_rank_cut_exits_three() {
    // cut lands between singular values 2 and 1.5
    let out = wick(&["ideal-chain", "--quon", "--d", "2", "--q", "0.5", "--m-max", "2", "--rel-tol", "0.76"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("inconclusive"));
}

#[test]
fn non_hermitian_file_names_the_offending_entry() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(
        dir.path(),
        "bad.json",
        r#"{"d":2,"entries":[{"i":1,"j":2,"k":1,"l":2,"re":0.5,"im":0}]}"#,
    );
    let out = wick(&["check-model", "--file", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Hermiticity"), "{err}");
    assert!(err.contains("[2,1,2,1]") && err.contains("[1,2,1,2]"), "{err}");
}

#[test]
fn usage_and_parameter_errors_exit_two() {
    let cases: [&[&str]; 5] = [
        &["check-model", "--quon", "--ccr", "--d", "2"],
        &["check-model", "--d", "2"],
        &["check-model", "--quon", "--d", "2", "--q", "1.5"],
        &["check-model", "--quon", "--d", "2", "--q", "0.5", "--lambda", "2"],
        &["reps", "--k3", "--x", "1+2j"],
    ];
    for args in cases {
        assert_eq!(wick(args).status.code(), Some(2), "{args:?}");
    }
    let out = wick(&["check-model", "--file", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dimension_mismatch_with_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "neg.json", NEGATIVE_FLIP);
    let out = wick(&["check-model", "--file", &file, "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = wick(&[
        "conjecture", "--ccr", "--d", "2", "--n", "3", "--format", "json",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"]["command"], "conjecture");
}

#[test]
fn export_dir_receives_subspace_bases() {
    let dir = tempfile::tempdir().unwrap();
    let out = wick(&[
        "ideal-chain", "--quon", "--d", "2", "--q", "0.5", "--m-max", "3",
        "--export-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.len() >= 4, "{names:?}");
    assert!(names.iter().all(|n| n.ends_with(".json")));
}

#[test]
fn timing_is_opt_in() {
    let args = ["check-model", "--ccr", "--d", "2", "--format", "json"];
    assert!(json(&wick(&args)).get("elapsed_ms").is_none_or(Value::is_null));
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert!(json(&wick(&timed))["elapsed_ms"].is_number());
}

#[test]
fn dense_cap_is_enforced() {
    let out = wick(&["--dense-cap", "8", "ideal-chain", "--ccr", "--d", "2", "--m-max", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["fock", "--quon", "--d", "2", "--q", "0.3", "--lambda-arg", "1.1", "--n", "4", "--format", "json"];
    assert_eq!(wick(&args).stdout, wick(&args).stdout);
}
