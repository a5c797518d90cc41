use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamma-poles")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn verify_records_follow_the_schema() {
    let out = run(&["verify", "--formula", "heart", "--n", "0..3", "--target-digits", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 4);
    let keys: Vec<&str> = records[0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec![
        "formula", "n", "x0", "nodes", "samples", "extrapolated", "target", "abs_error", "digits_matched",
        "empirical_order", "status",
    ];
    let mut got = keys.clone();
    got.sort();
    want.sort();
    assert_eq!(got, want);
    for (n, r) in records.iter().enumerate() {
        assert_eq!(r["formula"], "heart");
        assert_eq!(r["n"], n as u64);
        assert_eq!(r["x0"], "0.0009765625");
        assert_eq!(r["samples"].as_array().unwrap().len(), 16);
        assert!(r["samples"][0]["x"].is_string() && r["samples"][0]["value"].is_string());
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn csv_has_fixed_columns() {
    let out = run(&["verify", "--formula", "clubsuit", "--format", "csv", "--target-digits", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "formula,n,x0,nodes,extrapolated,target,abs_error,digits_matched,empirical_order,status"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "clubsuit");
    assert_eq!(row[1], "");
    assert_eq!(row[9], "pass");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "--formula", "clubsuit", "--x0", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--formula", "spade", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--formula", "heart"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--formula", "heart", "--n", "5..2"]).status.code(), Some(2));
}

#[test]
fn failing_records_exit_with_one() {
    // two nodes cannot reach 28 digits
    let out = run(&["verify", "--formula", "clubsuit", "--nodes", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)[0]["status"], "fail");
    let out = run(&["gamma-eval", "--z", "-4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"].as_str().unwrap().contains("pole at -4"));
}

#[test]
fn extract_and_laurent_examples() {
    let out = run(&["extract", "--formula", "clubsuit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["digits_vs_reference"], 24);
    assert!(v[0]["value"].as_str().unwrap().starts_with("5.77215664901532860606512"));

    let out = run(&["laurent", "--n", "2", "--coeffs", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)[0]["coefficients"][0];
    assert_eq!(c["power"], -1);
    assert!(c["value"].as_str().unwrap().starts_with("4.99999999999"));
}

#[test]
fn gamma_eval_reports_values() {
    let v = json(&run(&["gamma-eval", "--z", "-0.5", "--target-digits", "20"]));
    assert!(v["gamma"].as_str().unwrap().starts_with("-3.5449077018110320546"));
    assert!(v["log_gamma"].is_null());
}

#[test]
fn out_flag_writes_file_and_output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("gamma-poles-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let args = ["verify", "--formula", "unified", "--n", "0..4", "--target-digits", "20", "--out"];
    let mut a = args.to_vec();
    let p = path.to_str().unwrap();
    a.push(p);
    let first = run(&a);
    assert_eq!(first.status.code(), Some(0));
    assert!(first.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    run(&a);
    assert_eq!(first, std::fs::read(&path).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn diamond_alternative_form_is_flagged_on_stderr() {
    let out = run(&["verify", "--formula", "diamond", "--target-digits", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("alternative form of diamond disagrees"), "{err}");
}
