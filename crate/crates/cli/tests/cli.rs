//! End-to-end checks of the binary: subcommand output, determinism, exit
//! codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admissible"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn adm_a1_u3_json_weights() {
    let out = run(&["adm", "A1", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 3);
    // weights k w0 - (2n/3) wbar_1: pairings 0, -2/3, -4/3
    let mut weights: Vec<(i64, i64)> = records
        .iter()
        .map(|r| {
            let w = &r["weight"][0];
            (w[0].as_i64().unwrap(), w[1].as_i64().unwrap())
        })
        .collect();
    weights.sort();
    assert_eq!(weights, vec![(-4, 3), (-2, 3), (0, 1)]);
    for r in records {
        assert_eq!(r["k"][0], -4);
        assert_eq!(r["k"][1], 3);
        assert_eq!(r["u"], 3);
    }
}

#[test]
fn count_e7_a6_fixture() {
    let out = run(&["count", "E7", "7", "--levi", "fixture:A6", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["closed_form"], 1);
}

#[test]
fn verify_exits_zero() {
    let out = run(&["verify", "A1", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["adm", "B2", "5", "--format", "json"],
        vec!["modular", "A2", "2", "--check", "--format", "json"],
        vec!["fixedpoints", "A2", "5", "--levi", "1", "--format", "csv"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?} not byte-identical");
    }
}

#[test]
fn invalid_level_is_usage_error() {
    let out = run(&["adm", "A2", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gcd"), "structured message: {err}");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_lists_known_rows() {
    let out = run(&["table1", "--max-rank", "7", "--max-u", "8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let hits = v.as_array().unwrap();
    assert!(hits
        .iter()
        .any(|h| h["kind"] == "E7" && h["u"] == 7 && h["fixture"] == "A6"));
    assert!(hits
        .iter()
        .any(|h| h["kind"] == "G2" && h["u"] == 7 && h["fixture"] == "principal"));
}

#[test]
fn modular_check_reports_residuals() {
    let out = run(&["modular", "A1", "3", "--check", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let kw = &v[0];
    assert_eq!(kw["flavor"], "kac-wakimoto");
    let res = kw["residuals"].as_object().unwrap();
    assert!(res["kw_st3_vs_s2"].as_f64().unwrap() < 1e-10);
    assert!(res["ratio_max_deviation"].as_f64().unwrap() < 1e-10);
    assert!((res["ratio_mod_sq_times_ul"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}
