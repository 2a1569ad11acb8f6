//! End-to-end checks of the `treespec` binary: output contents, exit codes,
//! and determinism across runs and worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treespec"))
}

fn graph(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../graphs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn spectrum_star3_closed_form() {
    let out = run(&[
        "spectrum",
        graph("star3.graph").to_str().unwrap(),
        "--k",
        "5",
        "--method",
        "closed-form",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(1/4)*pi^2"));
    assert!(text.contains("(9/4)*pi^2"));
}

#[test]
fn spectrum_methods_agree_on_star3() {
    let secular = run(&[
        "spectrum",
        graph("star3.graph").to_str().unwrap(),
        "--k",
        "5",
        "--format",
        "csv",
    ]);
    assert!(secular.status.success());
    let closed = run(&[
        "spectrum",
        graph("star3.graph").to_str().unwrap(),
        "--k",
        "5",
        "--method",
        "closed-form",
        "--format",
        "csv",
    ]);
    assert!(closed.status.success());
    let parse = |text: String| -> Vec<f64> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    let a = parse(stdout(&secular));
    let b = parse(stdout(&closed));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
    }
}

#[test]
fn spectrum_audit_agrees() {
    let out = run(&[
        "spectrum",
        graph("path_half_threehalf.graph").to_str().unwrap(),
        "--k",
        "4",
        "--audit",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("(agree)"));
}

#[test]
fn spectrum_of_loop() {
    let out = run(&[
        "spectrum",
        graph("loop2.graph").to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert!(out.status.success());
    // λ_2 = 4π²/L² with L = 2.
    let text = stdout(&out);
    let lambda_2: f64 = text
        .lines()
        .find(|l| l.starts_with("lambda_2"))
        .and_then(|l| l.split('=').nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((lambda_2 - 9.869604401089358).abs() < 1e-8);
}

#[test]
fn closed_form_rejected_on_general_graph() {
    let out = run(&[
        "spectrum",
        graph("star_sqrt2.graph").to_str().unwrap(),
        "--method",
        "closed-form",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["spectrum", "no-such-file.graph"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_graph_is_usage_error() {
    let dir = std::env::temp_dir().join("treespec-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.graph");
    std::fs::write(
        &path,
        r#"{"vertices": ["a","b"], "edges": [{"from":"a","to":"b","length":{"rat":[1,-1]}}]}"#,
    )
    .unwrap();
    let out = run(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_csv_and_json() {
    let csv = run(&[
        "bounds",
        graph("star3.graph").to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert!(csv.status.success());
    let text = stdout(&csv);
    assert!(text.starts_with("graph_id,k,lambda"));
    assert!(text.contains("star3,1,"));

    let json = run(&[
        "bounds",
        graph("star3.graph").to_str().unwrap(),
        "--k",
        "3",
        "--format",
        "json",
    ]);
    assert!(json.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["graph_id"], "star3");
    assert_eq!(value["rows"].as_array().unwrap().len(), 3);
    assert_eq!(value["rows"][0]["eq_avg"], true);
}

#[test]
fn bounds_on_loop_marks_tree_bounds_not_applicable() {
    let out = run(&[
        "bounds",
        graph("loop2.graph").to_str().unwrap(),
        "--k",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["is_tree"], false);
    assert!(value["rows"][0]["bound_lmax"].is_null());
    assert_eq!(value["kkmm"]["equality"], true);
}

#[test]
fn verify_degenerate_and_deterministic() {
    let tiny = run(&["verify", "--trials", "1", "--max-edges", "2", "--seed", "5"]);
    assert!(tiny.status.success(), "{}", String::from_utf8_lossy(&tiny.stderr));

    let first = run(&["verify", "--trials", "6", "--max-edges", "6", "--seed", "9"]);
    let mut cmd = bin();
    cmd.args(["verify", "--trials", "6", "--max-edges", "6", "--seed", "9"]);
    cmd.env("TREESPEC_WORKERS", "3");
    let second = cmd.output().expect("binary runs");
    assert!(first.status.success());
    assert!(second.status.success());
    assert_eq!(stdout(&first), stdout(&second), "summary must not depend on workers");
}

#[test]
fn example_loop_shows_counterexample() {
    let out = run(&["example", "loop", "--length", "6.283185307179586"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda_2: 1.000000000000e0"));
    assert!(text.contains("2.500000000000e-1"));
    assert!(text.contains("bound exceeded (expected off trees): true"));
}

#[test]
fn example_star_limit_rejects_odd_n() {
    let out = run(&["example", "star-limit", "--n", "2,3,4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn example_gd_equality_path() {
    let out = run(&[
        "example",
        "gd-equality",
        "--graph",
        graph("path_half_threehalf.graph").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("x: 2"));
    assert!(text.contains("k = x*L(G): 4"));
}

#[test]
fn gd_equality_rejects_irrational_lengths() {
    let out = run(&[
        "example",
        "gd-equality",
        "--graph",
        graph("star_sqrt2.graph").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
