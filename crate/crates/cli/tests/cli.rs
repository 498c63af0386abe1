use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn parid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn without_runtime(jsonl: &str) -> Vec<Value> {
    jsonl
        .lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            if let Some(obj) = v.as_object_mut() {
                obj.remove("runtime");
            }
            v
        })
        .collect()
}

#[test]
fn simulate_writes_snapshots_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let o = parid(&["simulate", "--alpha", "2", "--steps", "2000", "--seed", "3", "--checkpoints", "500", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["degrees_t500.csv", "degrees_t2000.csv", "edge_trace.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let csv = std::fs::read_to_string(out.join("degrees_t2000.csv")).unwrap();
    let header: Value = serde_json::from_str(csv.lines().next().unwrap()).unwrap();
    assert_eq!(header["command"], "simulate");
    assert_eq!(header["seeds"][0], 3);
}

#[test]
fn theory_bk_has_one_row_per_degree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bk.csv");
    let o = parid(&["theory", "bk", "--k-max", "50", "--out", path(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 51);
    let first: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(first[0], "1");
    let b1: f64 = first[1].parse().unwrap();
    assert!((b1 - 0.405285).abs() < 1e-5, "{b1}");
}

#[test]
fn ensemble_output_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let o = parid(&[
            "ensemble", "--alpha", "2", "--steps", "800", "--replicas", "4", "--master-seed", "9",
            "--threads", threads, "--checkpoints", "100,400", "--out", path(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            without_runtime(&std::fs::read_to_string(out.join("raw.jsonl")).unwrap()),
            std::fs::read_to_string(out.join("summary.csv")).unwrap(),
        )
    };
    let (raw1, sum1) = run("1", "a");
    let (raw2, sum2) = run("3", "b");
    assert_eq!(raw1, raw2);
    let body = |s: &str| s.lines().skip(1).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(body(&sum1), body(&sum2));
}

#[test]
fn single_replica_has_zero_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one");
    let o = parid(&["ensemble", "--alpha", "2", "--steps", "300", "--replicas", "1", "--out", path(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = text.lines().skip(1);
    let cols: Vec<&str> = lines.next().unwrap().split(',').collect();
    let std_col = cols.iter().position(|&c| c == "std").unwrap();
    for row in lines {
        let v: f64 = row.split(',').nth(std_col).unwrap().parse().unwrap();
        assert_eq!(v, 0.0);
    }
}

#[test]
fn oracle_lists_exact_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.jsonl");
    let o = parid(&["oracle", "--t", "3", "--pmf", "1:0.6,2:0.4", "--compare-samples", "2000", "--out", path(&out)]);
    assert!(o.status.success());
    let lines = without_runtime(&std::fs::read_to_string(&out).unwrap());
    let mass: f64 = lines.iter().filter_map(|v| v["probability"].as_f64()).sum();
    assert!((mass - 1.0).abs() < 1e-12);
    assert!(lines.iter().any(|v| v.get("total_variation").is_some()));
}

#[test]
fn product_sweep_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.jsonl");
    let o = parid(&["verify", "product", "--cases", "1000", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failed_verdict_exits_one() {
    // Too few steps for the logarithmic edge law to settle.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.jsonl");
    let o = parid(&["verify", "edges", "--t", "100", "--replicas", "3", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.exists());
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(parid(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = parid(&["simulate", "--alpha", "0.5", "--steps", "10", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = parid(&["simulate", "--pmf", "1:0.5,x", "--steps", "10", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_enumeration_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.jsonl");
    let o = parid(&["oracle", "--t", "30", "--pmf", "1:0.5,5:0.5", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("state space"));
}

#[test]
fn resource_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    let o = parid(&["simulate", "--alpha", "1.5", "--truncate", "none", "--steps", "1000", "--endpoint-limit", "10", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
