//! End-to-end tests of the command-line binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const GRAPH: &str = "graph example {
  nodes: W A M Y;
  W -> A; W -> M; A -> M; A -> Y; M -> Y;
}
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_causalid"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "invalid JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn uniform_joint(names: &[&str]) -> String {
    let vars: Vec<Value> = names
        .iter()
        .map(|&n| serde_json::json!({"name": n, "states": 2}))
        .collect();
    let size = 1usize << names.len();
    let table: Vec<f64> = vec![1.0 / size as f64; size];
    serde_json::json!({"variables": vars, "table": table}).to_string()
}

#[test]
fn identify_reports_verdict_and_functional() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let q = write(
        dir.path(),
        "q.iv",
        "path A->M->Y = 1;\npath A->Y = 0;\noutcome Y;\n",
    );
    let out = run(&[
        "identify",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "IDENTIFIED_MWM_ONLY");
    assert_eq!(v["functional_text"], "sum_{m,w} p(Y|m,a) p(m|a',w) p(w)");
    assert_eq!(v["gates"].as_array().unwrap().len(), 4);
}

#[test]
fn identify_not_identified_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let q = write(
        dir.path(),
        "q.iv",
        "path W->A->Y = 1;\npath W->A->M->Y = 0;\npath W->M->Y = 0;\noutcome Y;\n",
    );
    let out = run(&[
        "identify",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "NOT_IDENTIFIED_MWM");
    assert!(v["functional_text"].is_null());
    assert!(v["note"].as_str().unwrap().contains("parametric"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", "graph broken { nodes: A;");
    let q = write(dir.path(), "q.iv", "outcome A;\n");
    let out = run(&[
        "identify",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn admg_identify_front_door_and_bow() {
    let dir = tempfile::tempdir().unwrap();
    let fd = write(
        dir.path(),
        "fd.cg",
        "graph fd { nodes: A M Y; A -> M; M -> Y; A <-> Y; }",
    );
    let q = write(dir.path(), "q.iv", "do A=1;\noutcome Y;\n");
    let out = run(&[
        "identify",
        "--admg",
        "--graph",
        fd.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "IDENTIFIED");
    assert_eq!(v["functional_text"], "sum_{m,a'} p(Y|m,a') p(m|a) p(a')");

    let bow = write(
        dir.path(),
        "bow.cg",
        "graph bow { nodes: A Y; A -> Y; A <-> Y; }",
    );
    let out = run(&[
        "identify",
        "--admg",
        "--graph",
        bow.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "NOT_IDENTIFIED");
}

#[test]
fn translate_ett_round_trips_through_identify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let rendered = dir.path().join("ett.iv");
    let out = run(&[
        "translate",
        "ett",
        "--graph",
        g.to_str().unwrap(),
        "--treat",
        "A=1",
        "--outcome",
        "Y",
        "--out",
        rendered.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&rendered).unwrap();
    assert!(text.contains("path A->Y = 1;"));
    assert!(text.contains("path A->M->Y = 1;"));
    assert!(text.contains("outcome Y A;"));

    let out = run(&[
        "identify",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        rendered.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "IDENTIFIED_SWM");
    assert_eq!(v["functional_text"], "sum_{w} p(Y|a,w) p(A,w)");
}

#[test]
fn evaluate_on_uniform_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let q = write(dir.path(), "q.iv", "do A=1;\noutcome Y;\n");
    let d = write(dir.path(), "d.json", &uniform_joint(&["W", "A", "M", "Y"]));
    let out = run(&[
        "evaluate",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
        "--dist",
        d.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "IDENTIFIED_SWM");
    let table = v["result"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 2);
    assert!((table[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn oracle_check_small_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let q = write(
        dir.path(),
        "q.iv",
        "path A->M->Y = 1;\npath A->Y = 0;\noutcome Y;\n",
    );
    let out = run(&[
        "oracle-check",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
        "--seeds",
        "10",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert!(v["max_abs_diff_disjoint_noise"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn witness_emits_verified_model_pair() {
    let out = run(&["witness", "fork"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["shape"], "fork");
    assert!(v["target_tv"].as_f64().unwrap() >= 0.05);
    assert!(v["observational_gap"].as_f64().unwrap() <= 1e-12);
    assert!(v["model1"]["equations"].is_object());
    assert!(v["model2"]["equations"].is_object());
}

#[test]
fn swig_splits_treated_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.cg", GRAPH);
    let q = write(dir.path(), "q.iv", "do A=1;\noutcome Y;\n");
    let out = run(&[
        "swig",
        "--graph",
        g.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("A[1]"));
    assert!(text.contains("A[1] -> Y") || text.contains("A[1] -> M"));
}

#[test]
fn estimate_uniform_law() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.json", &uniform_joint(&["C", "A", "M", "Y"]));
    let data = write(
        dir.path(),
        "d.csv",
        "C,A,M,Y\n0,0,0,0\n0,1,1,1\n1,0,1,0\n1,1,0,1\n",
    );
    let out = run(&[
        "estimate",
        "--dist",
        d.to_str().unwrap(),
        "--a",
        "0",
        "--a-prime",
        "1",
        "--data",
        data.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["phi"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(v["eif_mean"].as_f64().unwrap().abs() < 1e-12);
    assert!((v["robust_solution"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(v["empirical_estimate"].is_number());
}
