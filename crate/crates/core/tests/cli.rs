//! End-to-end runs of the `xi-audit` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_xi-audit"));
    c.env_remove("XI_AUDIT_PREC");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("xi-audit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn eval_xi_both_methods_passes() {
    let out = run(&["eval-xi", "--t", "0", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["command"], "eval-xi");
    assert_eq!(r["checks"][0]["name"], "xi_cross_method");
    assert_eq!(r["checks"][0]["status"], "pass");
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["checks", "command", "params", "precision_mode", "trace", "wall_time_ms"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verdict", "--t1", "6.0", "--t2", "0.25"]).status.code(), Some(2));
    assert_eq!(run(&["eval-xi", "--t", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["audit-identity", "--t1", "13"]).status.code(), Some(2));
    assert_eq!(run(&["--prec", "dec:5", "eval-xi", "--t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval-xi", "--t", "1", "--method", "simpson"]).status.code(), Some(2));
    assert_eq!(run(&["audit-signs", "--alpha", "11"]).status.code(), Some(2));
    let err = run(&["verdict", "--t1", "6.0", "--t2", "0.25"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("t1"));
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = scratch("config");
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"t1": 13, "t2": 0.25, "b": 1, "eps": 0.1, "prec": "dec:30"}"#).unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "audit-identity", "--b", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["precision_mode"], "dec:30");
    assert_eq!(r["params"]["b"], 2.0);
    assert_eq!(r["params"]["t1"], 13.0);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"t1": 13, "colour": 1}"#).unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "eval-xi"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = bin()
        .env("XI_AUDIT_PREC", "dec:25")
        .args(["eval-xi", "--t", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["precision_mode"], "dec:25");
    let flag = bin()
        .env("XI_AUDIT_PREC", "dec:25")
        .args(["--prec", "f64", "eval-xi", "--t", "3"])
        .output()
        .unwrap();
    assert_eq!(json(&flag)["precision_mode"], "f64");
}

#[test]
fn audit_identity_reports_are_byte_identical() {
    let dir = scratch("identity");
    let args = ["audit-identity", "--t1", "13", "--t2", "0.25", "--b", "1", "--eps", "0.1", "--out"];
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let mut v = args.to_vec();
        v.push(p.to_str().unwrap());
        assert_eq!(run(&v).status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let r: serde_json::Value = serde_json::from_slice(&x).unwrap();
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"energy_identity_residual"));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["paper_anchor"].as_str().is_some_and(|s| !s.is_empty())));
    assert_eq!(r["wall_time_ms"], 0);
}

#[test]
fn timing_flag_is_opt_in() {
    let out = run(&["--timing", "eval-xi", "--t", "2"]);
    assert!(json(&out)["wall_time_ms"].is_u64());
}

#[test]
fn svg_without_plotted_quantity_is_well_formed() {
    let dir = scratch("svg");
    let path = dir.join("empty.svg");
    let out = run(&["eval-xi", "--t", "1", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}

#[test]
fn q_plot_is_well_formed() {
    let dir = scratch("qplot");
    let path = dir.join("q.svg");
    let out = run(&["audit-signs", "--alpha", "13", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    let poly = doc.descendants().find(|n| n.has_tag_name("polyline")).expect("a data series");
    assert_eq!(poly.attribute("points").unwrap().split(' ').count(), 400);
}

#[test]
fn sweep_writes_one_row_per_alpha() {
    let dir = scratch("sweep");
    let out = run(&[
        "sweep",
        "--alpha-min",
        "13",
        "--alpha-max",
        "40",
        "--count",
        "10",
        "--parallel",
        "3",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("alpha,"));
    for k in 0..10 {
        assert!(dir.join(format!("point_{k:03}.json")).exists());
    }
    let serial = run(&["sweep", "--alpha-min", "13", "--alpha-max", "40", "--count", "10"]);
    assert_eq!(String::from_utf8(serial.stdout).unwrap(), csv);
}

#[test]
fn zero_table_round_trip() {
    let dir = scratch("zeros");
    let table = dir.join("zeros.txt");
    let out = run(&["find-zeros", "--t-min", "10", "--t-max", "30", "--table", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["params"]["count"], 3.0);
    let loaded = run(&["load-zeros", "--file", table.to_str().unwrap()]);
    assert_eq!(loaded.status.code(), Some(0));
    assert_eq!(json(&loaded)["checks"].as_array().unwrap().len(), 3);

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "21.0\n14.0\n").unwrap();
    assert_ne!(run(&["load-zeros", "--file", bad.to_str().unwrap()]).status.code(), Some(0));
    let missing = dir.join("missing.txt");
    assert_eq!(run(&["load-zeros", "--file", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verdict_is_inconclusive_with_replayed_trace_and_plot() {
    let dir = scratch("verdict");
    let svg = dir.join("f.svg");
    let out = run(&["verdict", "--t1", "13", "--t2", "0.25", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    assert_eq!(r["params"]["conclusion"], "inconclusive");
    assert!(r["trace"]["case_label"].is_string());
    let checks = r["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("replay."))
        .all(|c| c["status"] == "pass"));
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    let text = std::fs::read_to_string(&svg).unwrap();
    roxmltree::Document::parse(&text).expect("well-formed XML");
}

#[test]
fn symbolic_audit_passes() {
    let out = run(&["audit-symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["params"]["g1"].is_string());
}
