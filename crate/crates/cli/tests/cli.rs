//! End-to-end tests of the `bpl` binary.

use std::process::{Command, Output};

fn bpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpl")).args(args).env_remove("BPL_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    reader.records().map(|r| r.expect("csv row").iter().map(String::from).collect()).collect()
}

#[test]
fn idxset_full_two_by_two() {
    let o = bpl(&["idxset", "--n", "2", "--gen", "full", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# config {"));
    assert!(text.lines().any(|l| l == "# cardinality 3"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3);
    let mut alphas: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    alphas.sort();
    assert_eq!(alphas, ["(0,2)", "(1,1)", "(2,0)"]);
}

#[test]
fn kappa_constant() {
    let o = bpl(&["constants", "--kappa", "--primes", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v - 2.209).abs() <= 1e-3, "kappa = {v}");
}

#[test]
fn closed_forms() {
    let o = bpl(&["constants", "--rw", "2,2", "--lebesgue", "0", "--kadets", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    let values: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!((values[0] - 1.5).abs() < 1e-12);
    assert_eq!(values[1], 1.0);
    assert_eq!(values[2], 3.0);
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        vec!["idxset", "--n", "2"],
        vec!["idxset", "--n", "2", "--m", "2", "--gen", "nope"],
        vec!["lambda-hat", "--n", "2", "--m", "2", "--p", "0.5"],
        vec!["lambda-hat", "--n", "2", "--m", "2", "--tol", "2"],
        vec!["constants"],
        vec!["sweep", "--quantity", "lambda-hat", "--n", "5..2", "--m", "1"],
        vec!["verify", "--suite", "nope"],
    ] {
        let o = bpl(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: kind=argument reason="), "{err}");
    }
}

#[test]
fn cap_violation_exits_three() {
    let o = bpl(&["idxset", "--n", "64", "--m", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: kind=cap reason="), "{err}");
}

#[test]
fn characteristic_matches_closed_form() {
    let o = bpl(&["char", "--alpha", "1,1", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    let (lo, hi): (f64, f64) = (rows[0][2].parse().unwrap(), rows[0][3].parse().unwrap());
    assert!((lo - 2.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
}

#[test]
fn json_document() {
    let o = bpl(&["lambda-hat", "--n", "2", "--m", "1", "--format", "json", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["config"]["global"]["seed"], 3);
    assert_eq!(doc["config"]["command"]["command"], "lambda-hat");
    assert_eq!(doc["failures"].as_array().unwrap().len(), 0);
    let row = &doc["rows"][0];
    assert_eq!(row["quantity"], "lambda_hat");
    let (lo, hi) = (row["lo"].as_f64().unwrap(), row["hi"].as_f64().unwrap());
    assert!(lo <= hi && lo >= 1.0);
}

#[test]
fn sweep_is_row_major_and_deterministic() {
    let args = ["sweep", "--quantity", "lambda-hat", "--p", "1,inf", "--n", "1..2", "--m", "1,2"];
    let a = bpl(&args);
    let b = bpl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = data_rows(&stdout(&a));
    let keys: Vec<(String, String, String)> = rows.iter().map(|r| (r[4].clone(), r[1].clone(), r[2].clone())).collect();
    let expected: Vec<(String, String, String)> = ["1", "inf"]
        .iter()
        .flat_map(|p| {
            ["1", "2"].iter().flat_map(move |n| ["1", "2"].iter().map(move |m| (p.to_string(), n.to_string(), m.to_string())))
        })
        .collect();
    assert_eq!(keys, expected);
    for r in &rows {
        let (lo, hi): (f64, f64) = (r[7].parse().unwrap(), r[8].parse().unwrap());
        assert!(lo.is_finite() && hi.is_finite() && lo <= hi, "{r:?}");
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["sweep", "--quantity", "chimon", "--n", "2,3", "--m", "2", "--p", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_bpl")).args(args).env("BPL_THREADS", "1").output().unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_bpl")).args(args).env("BPL_THREADS", "3").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_bpl")).args(args).env("BPL_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn lorentz_suite_reports_checks() {
    let o = bpl(&["lorentz-suite", "--m", "2", "--n", "4", "--r", "2", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert!(rows.iter().any(|r| r[0] == "lambda_hat" && r[1] == "tetra"));
    assert!(rows.iter().filter(|r| r[0] == "pointwise").all(|r| r[7] == "0"));
}

#[test]
fn bohr_disc() {
    let o = bpl(&["bohr", "--n", "1", "--m", "64", "--gen", "full_up_to", "--p", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    let (lo, hi): (f64, f64) = (rows[0][7].parse().unwrap(), rows[0][8].parse().unwrap());
    assert!((lo - 1.0 / 3.0).abs() < 1e-9 && hi <= 0.37, "[{lo}, {hi}]");
}
