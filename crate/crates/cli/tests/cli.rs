use std::process::{Command, Output};

use serde_json::Value;
use walkrange_cli::Report;

fn walkrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkrange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = walkrange(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(walkrange(args).stdout).unwrap()
}

#[test]
fn oracle_doublepoints_at_length_four() {
    let v = json(&["oracle", "--n", "2", "--track", "2"]);
    assert_eq!(v["results"], serde_json::json!({"N4=1": 4, "N4=2": 2}));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn xi_of_two() {
    let v = json(&["asymp", "--xi", "2"]);
    assert_eq!(v["results"][0]["xi"].as_f64(), Some(1.047198));
    assert_eq!(
        stdout(&["asymp", "--xi", "2", "--format", "csv"]),
        "r,xi\n2,1.047198\n"
    );
}

#[test]
fn doublepoint_counts_are_strings() {
    let v = json(&["dist", "--n", "39", "--k", "2", "--lmax", "10"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0]["l"], 0);
    assert_eq!(rows[0]["count"], "9379491068294083374788");
    assert_eq!(rows[10]["count"], "478890500239753836");
    assert_eq!(rows[3]["probability"].as_f64(), Some(0.0485717));
    assert_eq!(v["parameters"]["backend"], "exact");
}

#[test]
fn float_backend() {
    let v = json(&[
        "dist", "--n", "300", "--k", "1", "--lmax", "2", "--digits", "4",
    ]);
    assert_eq!(v["parameters"]["backend"], "float");
    assert!(v["results"][0].get("count").is_none());
    let p = v["results"][0]["probability"].as_f64().unwrap();
    assert!((p - 0.2492).abs() < 1e-4, "{p}");
}

#[test]
fn reports_round_trip() {
    for args in [
        &["dist", "--n", "12", "--k", "3", "--lmax", "4"][..],
        &["range-dist", "--n", "9"],
        &["moments", "--spec", "1:1,2:1", "--n", "20"],
        &["first-moment", "--d", "2", "--k", "1", "--n", "30"],
        &["asymp", "--table", "3"],
        &["asymp", "--table", "2", "--kmax", "4"],
        &["oracle", "--n", "4", "--track", "1,2", "--range"],
    ] {
        let text = stdout(args);
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report.to_json() + "\n", text, "{args:?}");
    }
}

#[test]
fn csv_headers() {
    let head = |args: &[&str]| stdout(args).lines().next().unwrap().to_string();
    assert_eq!(
        head(&["dist", "--n", "5", "--k", "1", "--format", "csv"]),
        "l,count,probability"
    );
    assert_eq!(
        head(&["range-dist", "--n", "5", "--format", "csv"]),
        "m,count,probability"
    );
    assert_eq!(
        head(&["asymp", "--table", "3", "--format", "csv"]),
        "k1,k2,covariance"
    );
    assert_eq!(
        head(&["oracle", "--n", "3", "--format", "csv"]),
        "key,value"
    );
}

#[test]
fn covariance_table() {
    let v = json(&["asymp", "--table", "3", "--digits", "5"]);
    let rows = v["results"].as_array().unwrap();
    let find = |a: i64, b: i64| {
        rows.iter().find(|r| r["k1"] == a && r["k2"] == b).unwrap()["covariance"]
            .as_f64()
            .unwrap()
    };
    assert_eq!(find(1, 1), 0.5);
    assert_eq!(find(1, 2), -0.08877);
    assert_eq!(find(100, 100), 1.47074);
}

#[test]
fn verify_small_lengths() {
    let out = walkrange(&["verify", "--n-max", "8", "--threads", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["notes"]["mismatches"], 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 16);
}

#[test]
fn exit_codes() {
    assert_eq!(walkrange(&["dist", "--n", "3"]).status.code(), Some(2));
    assert_eq!(walkrange(&["asymp"]).status.code(), Some(2));
    assert_eq!(walkrange(&["asymp", "--table", "4"]).status.code(), Some(2));
    let out = walkrange(&["oracle", "--n", "20", "--d", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "BudgetExceeded");
    let out = walkrange(&["moments", "--spec", "1:5", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "UnsupportedDepth");
    let out = walkrange(&["moments", "--spec", "1-2", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
}
