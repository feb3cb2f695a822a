use std::path::Path;
use std::process::{Command, Output};

use podsim::formats::read_graph;
use podsim_core::graph::homophily;
use podsim_core::Normalization;

fn podsim(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_podsim"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SMALL_RUN: &str = r#"{
  "graph": {"type": "er", "n": 120, "rho": 0.08},
  "model": {"type": "dcc"},
  "schedule": {"type": "split", "switch_tick": 10},
  "T": 20,
  "repetitions": 2,
  "seed": 3
}"#;

#[test]
fn run_writes_trace_summary_and_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL_RUN);
    let out = dir.path().join("out");
    let res = podsim(&out, &["run", &cfg]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );

    let trace = std::fs::read_to_string(out.join("small/trace.csv")).unwrap();
    let rows: Vec<&str> = trace.lines().skip(1).collect();
    assert_eq!(rows.len(), 21);
    for row in rows {
        let cells: Vec<f64> = row.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 14);
        let total: f64 = cells[..7].iter().sum();
        assert!((total - 1.0).abs() < 1e-5, "{row}");
    }

    let schedule: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("small/schedule.json")).unwrap())
            .unwrap();
    assert_eq!(schedule["T"], 20);
    assert_eq!(schedule["levels"][9], serde_json::json!([6]));
    assert_eq!(schedule["levels"][10], serde_json::json!([0]));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("small/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["config"]["seed"], 3);
    assert_eq!(summary["final_mean"].as_array().unwrap().len(), 7);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL_RUN);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(podsim(&a, &["run", &cfg]).status.success());
    assert!(podsim(&b, &["--workers", "2", "run", &cfg])
        .status
        .success());
    for file in ["trace.csv", "summary.json", "schedule.json"] {
        let x = std::fs::read(a.join("small").join(file)).unwrap();
        let y = std::fs::read(b.join("small").join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL_RUN);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(podsim(&a, &["run", &cfg]).status.success());
    assert!(podsim(&b, &["--seed", "4", "run", &cfg]).status.success());
    let x = std::fs::read(a.join("small/trace.csv")).unwrap();
    let y = std::fs::read(b.join("small/trace.csv")).unwrap();
    assert_ne!(x, y);
}

#[test]
fn out_of_range_field_exits_2_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"graph": {"type": "er", "n": 100, "rho": 1.5}, "model": {"type": "simple"}}"#,
    );
    let res = podsim(&dir.path().join("out"), &["run", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    let err: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"], "schema");
    assert_eq!(
        err["fields"],
        serde_json::json!([{"field": "graph.rho", "reason": "must lie in [0, 1]"}])
    );
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_keys_and_missing_files_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "typo.json",
        r#"{"graph": {"type": "er", "n": 100, "rho": 0.1}, "model": {"type": "simple"}, "repetition": 3}"#,
    );
    let res = podsim(dir.path(), &["run", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("repetition"));

    let res = podsim(dir.path(), &["run", "/nonexistent/config.json"]);
    assert_eq!(res.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(err["error"], "io");

    let res = podsim(dir.path(), &["suite", "nope"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn graph_file_round_trips_with_same_homophily() {
    let dir = tempfile::tempdir().unwrap();
    let res = podsim(dir.path(), &["--seed", "5", "graph", "preset:graph-mag"]);
    assert!(res.status.success());
    let stderr = String::from_utf8(res.stderr).unwrap();
    let reported: f64 = stderr.trim().rsplit(' ').next().unwrap().parse().unwrap();
    let text = std::fs::read_to_string(dir.path().join("graph-mag/graph.txt")).unwrap();
    let g = read_graph(&text).unwrap();
    assert_eq!(g.node_count(), 500);
    let h = homophily(&g, Normalization::PerEdge).unwrap();
    assert!((h - reported).abs() < 5e-5, "{h} vs {reported}");
}

#[test]
fn beta_table_matches_dcc_rows() {
    let dir = tempfile::tempdir().unwrap();
    assert!(podsim(dir.path(), &["beta-table", "preset:model-dcc"])
        .status
        .success());
    let csv = std::fs::read_to_string(dir.path().join("model-dcc/beta_table.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "b_0,b_1,b_2,b_3,b_4,b_5,b_6");
    assert_eq!(lines[4], "0.018,0.500,0.982,0.999,0.982,0.500,0.018");
}

#[test]
fn census_and_homophily_commands_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let census = write(
        dir.path(),
        "c.json",
        r#"{"graph": {"type": "ws", "n": 80, "k": 3, "rho": 0.2}, "taus": [0, 3], "trials": 5}"#,
    );
    assert!(podsim(dir.path(), &["census", &census]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("c/census.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 7);
    assert!(csv.contains("ws,3,6,1.0000"));

    let homo = write(
        dir.path(),
        "h.json",
        r#"{"graph": {"type": "ba", "n": 60, "m": 2}, "seeds": 3}"#,
    );
    assert!(podsim(dir.path(), &["homophily", &homo]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("h/homophily.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("graph_type,seed,homophily,node_variance\nba,0,"));
}

#[test]
fn presets_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let res = podsim(dir.path(), &["presets"]);
    let names = String::from_utf8(res.stdout).unwrap();
    assert_eq!(names.lines().count(), podsim::presets::names().count());
    assert!(names.lines().any(|l| l == "er-dcc-gradual"));
}
