use std::process::{Command, Output};

use hardy_core::hardy::extremal_f;
use hardy_core::PowerWeightParams;
use serde_json::Value;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn constant_json_and_codes() {
    let out = hardy(&["constant", "--class", "A", "--p", "3", "--a", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "hardy.constant.v1");
    assert_eq!(v["Kp"].as_f64().unwrap(), 1.25);
    assert_eq!(v["case"], "a_beta0");

    let v = json(&hardy(&["constant", "--class", "C", "--p", "1", "--a", "-0.5", "--format", "json"]));
    assert!((v["K"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let out = hardy(&["constant", "--class", "A", "--p", "2", "--a", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("class A requires a > -1"));
}

#[test]
fn roots_subcommand() {
    let v = json(&hardy(&["roots", "--name", "beta0", "--p", "3", "--a", "0.5", "--format", "json"]));
    assert_eq!(v["schema"], "hardy.root.v1");
    assert!((v["root"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
    for key in ["name", "p", "a", "residual", "iterations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(hardy(&["roots", "--name", "gamma", "--p", "3", "--a", "0.5"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = hardy(&["verify", "--suite", "theorem-A", "--p", "3", "--a", "0.5", "--seed", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["summaries"][0]["seed"], 7);
    assert_eq!(hardy(&["verify", "--suite", "corollary-e", "--p", "2", "--a", "-1.5"]).status.code(), Some(2));
    assert_eq!(hardy(&["verify"]).status.code(), Some(2));
}

#[test]
fn verify_majorization_reports_each_case() {
    let out = hardy(&["verify", "--majorization", "--p", "3", "--a", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "hardy.majorization.v1");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["report"]["pass"] == true));
}

#[test]
fn ratio_of_extremal_pair_is_one() {
    let pr = PowerWeightParams::new(2.0, 0.0).unwrap();
    let f = extremal_f(&pr, 0.0, 2.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    let out = hardy(&["ratio", "--file", path.to_str().unwrap(), "--p", "2", "--a", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    std::fs::write(&path, "{\"pieces\": []}").unwrap();
    let out = hardy(&["ratio", "--file", path.to_str().unwrap(), "--p", "2", "--a", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_over_decreasing_class() {
    let out = hardy(&[
        "sweep", "--class", "A", "--p-min", "2", "--p-max", "4", "--a-min", "-0.9", "--a-max", "p-1.0001", "--steps", "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,a,class,sup,alpha_hat,beta_hat,closed_form,abs_diff,status");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 400);
    let max_diff = rows.iter().map(|r| r[7].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(max_diff < 1e-6, "max |diff| = {max_diff}");
}

#[test]
fn sweep_through_the_transition() {
    let v = json(&hardy(&[
        "sweep", "--class", "B", "--p-min", "3", "--p-max", "3", "--a-min", "0.2", "--a-max", "0.6", "--steps", "9",
        "--format", "json",
    ]));
    let a_star = 0.4;
    for row in v["rows"].as_array().unwrap() {
        let a = row["a"].as_f64().unwrap();
        let kp = row["closed_form"].as_f64().unwrap();
        if a <= a_star - 1e-9 {
            assert_eq!(kp, 1.0, "a = {a}");
        } else if a > a_star + 1e-9 {
            assert!(kp > 1.0, "a = {a}");
        }
    }
}

#[test]
fn sweep_skips_invalid_points_and_orders_rows() {
    let v = json(&hardy(&[
        "sweep", "--class", "A", "--p-min", "2", "--p-max", "3", "--a-min", "-1.5", "--a-max", "0", "--steps", "2",
        "--format", "json",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let status: Vec<_> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["skipped", "ok", "skipped", "ok"]);
    assert!(rows[0]["reason"].as_str().unwrap().contains("a > -1"));
}

#[test]
fn output_is_stable_across_jobs() {
    let args = ["sweep", "--class", "C", "--p-min", "1", "--p-max", "3", "--a-min", "-0.8", "--a-max", "0", "--steps", "4"];
    let one = hardy(&[&["--jobs", "1"], &args[..]].concat());
    let four = hardy(&[&["--jobs", "4"], &args[..]].concat());
    assert_eq!(one.stdout, four.stdout);
    let verify = ["verify", "--suite", "corollary-e", "--p", "3", "--a", "0.5", "--seed", "3", "--format", "json"];
    assert_eq!(hardy(&verify).stdout, hardy(&verify).stdout);
}

#[test]
fn table_and_bounds_d() {
    let out = hardy(&["bounds-d", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().split_whitespace().eq(["p", "lower", "upper", "exact", "empirical_lower"]));
    let v = json(&hardy(&["bounds-d", "--p", "2.5", "--samples", "50", "--format", "json"]));
    assert!(v["lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
    assert!(v["empirical_lower"].as_f64().unwrap() <= v["upper"].as_f64().unwrap());
}
