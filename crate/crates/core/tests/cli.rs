use std::process::{Command, Output};

use degbell::MPoly;
use serde_json::value::RawValue;
use serde_json::Value;

fn degbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degbell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bell_table_text() {
    let o = degbell(&["table", "--family", "bell", "--n-max", "3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().last().unwrap().ends_with("Bel_3(x) = x^3 + 3x^2 + x"));
}

#[test]
fn dstirling_table_json() {
    let o = degbell(&["table", "--family", "dstirling", "--n-max", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = v
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["n"] == 2 && e["m"] == 1)
        .expect("(2,1) entry");
    let expected = serde_json::json!([
        {"coeff": "-1", "pow": {"lambda": 1, "L": 0, "x": 0, "y": 0}},
        {"coeff": "1", "pow": {"lambda": 0, "L": 0, "x": 0, "y": 0}}
    ]);
    assert_eq!(entry["poly"], expected);
}

#[test]
fn stirling1_single_row() {
    let o = degbell(&["table", "--family", "stirling1", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
    let o = degbell(&["table", "--family", "stirling1", "--n-max", "0", "--format", "json"]);
    assert_eq!(stdout(&o), "[[1]]\n");
}

#[test]
fn stirling_tables_are_exact_integers() {
    let o = degbell(&["table", "--family", "stirling1", "--n-max", "25", "--format", "json"]);
    let out = stdout(&o);
    let last_row = out.rsplit("],[").next().unwrap();
    // s(25,1) = 24! does not fit in 64 bits
    assert!(last_row.starts_with("0,620448401733239439360000,"), "{last_row}");
    let o = degbell(&["table", "--family", "stirling2", "--n-max", "6", "--format", "csv"]);
    assert!(stdout(&o).lines().any(|l| l == "6,2,31"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(degbell(&["table", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(degbell(&["table"]).status.code(), Some(2));
    assert_eq!(degbell(&["frobnicate"]).status.code(), Some(2));
    let o = degbell(&["eval", "--n", "2", "--lambda", "0", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));
    assert_eq!(degbell(&["eval", "--n", "2", "--lambda", "-1", "--x", "1"]).status.code(), Some(2));
    assert_eq!(degbell(&["eval", "--n", "2", "--lambda", "-2.5", "--x", "1"]).status.code(), Some(2));
    assert_eq!(degbell(&["verify", "--terms", "0"]).status.code(), Some(2));
}

#[test]
fn eval_values() {
    let o = degbell(&["eval", "--n", "2", "--lambda", "0.5", "--x", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0630).abs() < 1e-4);

    let o = degbell(&["eval", "--n", "0", "--lambda", "0.7", "--x", "3.2"]);
    assert_eq!(stdout(&o), "value = 1\n");

    let o = degbell(&[
        "eval", "--n", "2", "--lambda", "0.5", "--x", "1", "--dobinski", "--terms", "80",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["dobinski"]["abs_error"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["dobinski"]["passed"], true);
}

#[test]
fn eval_reports_a_failing_gap() {
    // three terms are far too few
    let o = degbell(&["eval", "--n", "4", "--lambda", "0.5", "--x", "2", "--dobinski", "--terms", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_small_and_json() {
    let o = degbell(&["verify", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("checks passed"));

    let o = degbell(&["verify", "--n-max", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    assert!(items.iter().any(|i| i.get("range").is_some()));
    assert!(items.iter().any(|i| i.get("abs_error").is_some()));
    assert!(items.iter().all(|i| i["passed"] == true));

    let o = degbell(&["verify", "--n-max", "2", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.starts_with("identity,n,lambda,x,terms,lhs,rhs,abs_error,passed\n"));
}

#[test]
fn verify_failure_sets_exit_one() {
    // 2 terms cannot reach 1e-9
    let o = degbell(&["verify", "--n-max", "3", "--terms", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn poly_json_round_trips_byte_identically() {
    let o = degbell(&["table", "--family", "dbell", "--n-max", "6", "--format", "json"]);
    #[derive(serde::Deserialize)]
    struct Entry<'a> {
        #[serde(borrow)]
        poly: &'a RawValue,
    }
    let out = stdout(&o);
    let entries: Vec<Entry> = serde_json::from_str(&out).unwrap();
    assert_eq!(entries.len(), 7);
    for entry in entries {
        let raw = entry.poly.get();
        let p: MPoly = serde_json::from_str(raw).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), raw);
    }
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let a = stdout(&degbell(&["verify", "--n-max", "5", "--format", "json"]));
    let b = stdout(&degbell(&["verify", "--n-max", "5", "--format", "json"]));
    assert_eq!(a, b);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.txt");
    let o = degbell(&[
        "table", "--family", "bell", "--n-max", "3", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&degbell(&["table", "--family", "bell", "--n-max", "3"])));
}
