//! End-to-end tests of the binary: golden outputs and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_branchlab")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).env("BRANCHLAB_SEED", "7").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct Fixtures {
    _dir: tempfile::TempDir,
    cusp: PathBuf,
    b2: PathBuf,
    parab: PathBuf,
    cluster: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let cusp = write(dir.path(), "cusp.branch", "# cusp\nfield: Q\nx: t^2\ny: t^3\n");
    let b2 = write(dir.path(), "b2.branch", "field: Q\nx: t^4\ny: t^6 + t^7\n");
    let parab = write(dir.path(), "parab.branch", "field: Q\nx: t\ny: t^2\n");
    let cluster = write(
        dir.path(),
        "cusp.cluster",
        "point 0: parent=none, prox=[], deg=1\n\
         point 1: parent=0, prox=[0], deg=1\n\
         point 2: parent=1, prox=[0,1], deg=1\n",
    );
    Fixtures { _dir: dir, cusp, b2, parab, cluster }
}

#[test]
fn tableau_report_contains_rows() {
    let fx = fixtures();
    let out = run(&["tableau", fx.cusp.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("p: 3"), "{text}");
    assert!(text.contains("c: 2"), "{text}");
    assert!(text.contains("a: inf"), "{text}");
}

#[test]
fn invariants_report_contains_semigroup() {
    let fx = fixtures();
    let out = run(&["invariants", fx.b2.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("r: 4 6 13"));
}

#[test]
fn intersect_all_methods_agree() {
    let fx = fixtures();
    let out = run(&[
        "intersect",
        fx.cusp.to_str().unwrap(),
        fx.parab.to_str().unwrap(),
        "--method",
        "all",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("tableau=3 resultant=3 noether=3 AGREE"));
}

#[test]
fn matrices_report_renders_blocks() {
    let fx = fixtures();
    let out = run(&["matrices", fx.cluster.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("N = [[-3,0,1],[0,-2,1],[1,1,-1]]"), "{text}");
    assert!(text.contains("Q = [[1,0,0],[1,1,0],[2,1,1]]"), "{text}");
    assert!(text.contains("M = [[1,1,2],[1,2,3],[2,3,6]]"), "{text}");
    assert!(text.contains("AGREE"), "{text}");
}

#[test]
fn single_point_matrix_renders_flat() {
    let dir = tempfile::tempdir().unwrap();
    let single = write(dir.path(), "one.cluster", "point 0: parent=none, prox=[], deg=1\n");
    let out = run(&["matrices", single.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("N = [-1]"));
}

#[test]
fn resolve_reports_cluster_and_multiplicities() {
    let fx = fixtures();
    let out = run(&["resolve", fx.b2.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("m: 4 2 2 1 1"), "{text}");
    assert!(text.contains("defect-check: PASS"), "{text}");
    // the rendered cluster is itself a valid cluster file
    let dir = tempfile::tempdir().unwrap();
    let cluster_text: String =
        text.lines().filter(|l| l.starts_with("point")).map(|l| format!("{l}\n")).collect();
    let path = write(dir.path(), "resolved.cluster", &cluster_text);
    let again = run(&["matrices", path.to_str().unwrap()]);
    assert!(again.status.success());
}

#[test]
fn approx_realizes_semigroup_generator() {
    let fx = fixtures();
    let out = run(&["approx", fx.b2.to_str().unwrap(), "--index", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("iota: 13"), "{text}");
    assert!(text.contains("curvette-check: PASS"), "{text}");
}

#[test]
fn check_runs_suites_on_both_file_kinds() {
    let fx = fixtures();
    let out = run(&["check", fx.b2.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 failed"));
    let out = run(&["check", fx.cluster.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn oracle_suites_pass_with_fixed_seed() {
    let out = run(&["oracle", "--pairs", "6", "--clusters", "25", "--tableaux", "8"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn json_reports_round_trip() {
    let fx = fixtures();
    let out = run(&["tableau", fx.b2.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let t = branchlab_core::hn::tableau_from_json(&v).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(t.m_list(), &[3, 2]);

    let out = run(&["matrices", fx.cluster.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let n = branchlab_core::ExactMatrix::from_json(&v["N"]).unwrap();
    assert_eq!(n.render_compact(), "[[-3,0,1],[0,-2,1],[1,1,-1]]");
    assert_eq!(v["consistency"], "AGREE");

    let out = run(&["resolve", fx.cusp.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = branchlab_core::cluster::cluster_from_json(&v["cluster"]).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(v["m"], serde_json::json!(["2", "1", "1"]));
}

#[test]
fn exit_codes_for_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    // missing file
    let out = run(&["tableau", dir.path().join("nope.branch").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // malformed polynomial names the line
    let bad = write(dir.path(), "bad.branch", "field: Q\nx: t +\ny: t\n");
    let out = run(&["tableau", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    // usage errors
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["approx", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_prime_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "gf6.branch", "field: GF(6)\nx: t^2\ny: t^3\n");
    let out = run(&["tableau", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn prime_field_branch_works() {
    let dir = tempfile::tempdir().unwrap();
    let b = write(dir.path(), "p.branch", "field: GF(101)\nx: t^4\ny: t^6 + t^7\n");
    let out = run(&["invariants", b.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("r: 4 6 13"));
}
