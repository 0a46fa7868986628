//! End-to-end behaviour of the `flagrank` binary: outputs, exit codes,
//! configuration and the report cache.

use std::path::Path;
use std::process::{Command, Output};

fn flagrank(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flagrank"));
    cmd.args(args).env_remove("FLAGRANK_CONFIG");
    if let Some(path) = config {
        cmd.env("FLAGRANK_CONFIG", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn dim_reports_sizes() {
    let out = flagrank(&["dim", "0,2;3", "--json"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["dim"].as_u64(), v["span"].as_u64(), v["ambient"].as_u64(), v["alpha"].as_u64()), (Some(5), Some(14), Some(15), Some(1)));
}

#[test]
fn malformed_shapes_are_usage_errors() {
    let out = flagrank(&["dim", "2,1;4"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn zero_h_is_a_usage_error() {
    assert_eq!(flagrank(&["secant", "0,1;3", "--h", "0"], None).status.code(), Some(2));
    assert_eq!(flagrank(&["scan", "--nmax", "3", "--h", "0..2"], None).status.code(), Some(2));
}

#[test]
fn unknown_suites_and_missing_arguments_are_usage_errors() {
    assert_eq!(flagrank(&["verify", "bogus"], None).status.code(), Some(2));
    assert_eq!(flagrank(&["secant", "0,1;3"], None).status.code(), Some(2));
    assert_eq!(flagrank(&["scan", "--h", "2"], None).status.code(), Some(2));
}

#[test]
fn caps_exit_with_code_3() {
    let out = flagrank(&["secant", "1,2;5", "--h", "3", "--cap-rows", "10"], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn secant_is_certified_by_default() {
    let v = json(&flagrank(&["secant", "0,1;2", "--h", "2", "--json"], None));
    assert_eq!(v["defect"].as_u64(), Some(1));
    assert_eq!(v["certified"].as_bool(), Some(true));
    let v = json(&flagrank(&["secant", "0,1;2", "--h", "2", "--json", "--no-confirm"], None));
    assert_eq!(v["confirm_prime"], serde_json::Value::Null);
}

#[test]
fn config_file_sets_defaults_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("flagrank.conf");
    std::fs::write(&config, "prime = 1000003\nseed = 5\n").unwrap();
    let v = json(&flagrank(&["secant", "0,1;3", "--h", "2", "--json"], Some(&config)));
    assert_eq!((v["prime"].as_u64(), v["seed"].as_u64()), (Some(1_000_003), Some(5)));
    let v = json(&flagrank(&["secant", "0,1;3", "--h", "2", "--json", "--seed", "9"], Some(&config)));
    assert_eq!((v["prime"].as_u64(), v["seed"].as_u64()), (Some(1_000_003), Some(9)));
    std::fs::write(&config, "colour = blue\n").unwrap();
    assert_eq!(flagrank(&["secant", "0,1;3", "--h", "2"], Some(&config)).status.code(), Some(2));
}

#[test]
fn cache_is_filled_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("reports.ndjson");
    let cache_arg = cache.to_str().unwrap();
    let first = flagrank(&["scan", "--nmax", "3", "--h", "1..2", "--json", "--cache", cache_arg], None);
    assert!(first.status.success());
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert_eq!(lines, 6);
    let second = flagrank(&["scan", "--nmax", "3", "--h", "1..2", "--json", "--cache", cache_arg], None);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), lines);
}

#[test]
fn scan_keeps_grid_order_and_skips_saturated_cells() {
    let v = json(&flagrank(&["scan", "--shapes", "0,1;2 0,1;3", "--h", "2..3", "--json", "--workers", "3"], None));
    let cells: Vec<(String, u64, bool)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["shape"].as_str().unwrap().to_string(), e["h"].as_u64().unwrap(), e["skipped"].as_bool().unwrap()))
        .collect();
    assert_eq!(
        cells,
        [("0,1;2".into(), 2, false), ("0,1;2".into(), 3, true), ("0,1;3".into(), 2, false), ("0,1;3".into(), 3, false)]
    );
}

#[test]
fn csv_has_a_header_and_one_row_per_report() {
    let out = flagrank(&["scan", "--nmax", "3", "--h", "2", "--csv"], None);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("shape,h,expected_dim"));
    assert_eq!(lines.filter(|l| !l.is_empty()).count(), 3);
}

#[test]
fn bounds_lists_applicable_regimes() {
    let v = json(&flagrank(&["bounds", "1,2;51", "--json"], None));
    assert_eq!(v["bounds"]["asymptotic"]["h_max"].as_u64(), Some(300));
    assert!(v["bounds"]["flag_bound"]["applicable"].as_bool().unwrap());
    let v = json(&flagrank(&["bounds", "1,3;4", "--json"], None));
    assert!(v["bounds"].get("reduced_flag_bound").is_some());
    assert!(v["bounds"].get("flag_bound").is_none());
}

#[test]
fn verify_suites_pass_and_report_json() {
    for suite in ["osc", "wb", "flat", "proj", "chordal"] {
        let out = flagrank(&["verify", suite, "--json"], None);
        assert_eq!(out.status.code(), Some(0), "{}", suite);
        let v = json(&out);
        assert_eq!(v["suite"].as_str(), Some(suite));
        assert_eq!(v["passed"].as_bool(), Some(true));
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["outcome"] == "pass"));
    }
}

#[test]
fn cross_suite_flags_asymptotic_counterexamples_as_informational() {
    let out = flagrank(&["verify", "cross", "--json", "--budget", "60s"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let failing: Vec<(&str, bool)> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["outcome"] == "fail")
        .map(|c| (c["input"].as_str().unwrap(), c["informational"].as_bool().unwrap()))
        .collect();
    assert_eq!(failing, [("shape=0,1;3 h=3", true), ("shape=G:2;8 h=4", true)]);
}
