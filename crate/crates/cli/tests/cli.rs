use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn nimtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nimtree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn edge_file(n: usize, edges: &[(usize, usize)]) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "{n}").unwrap();
    for (a, b) in edges {
        writeln!(f, "{a} {b}").unwrap();
    }
    f
}

fn star(n: usize) -> NamedTempFile {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    edge_file(n, &edges)
}

#[test]
fn count_both_matches_table() {
    let o = nimtree(&["count", "--k", "1", "--n", "12", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.trim_end().ends_with("12,134"));
    assert_eq!(text.lines().filter(|l| *l == "n,count").count(), 1);
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn two_nim_sequence() {
    let o = nimtree(&["count", "--k", "2", "--n", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("11,12"));
}

#[test]
fn star_is_three_nim() {
    let f = star(7);
    let o = nimtree(&["classify", "--k", "3", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "KNim");
    assert_eq!(v["m"], 5);
}

#[test]
fn printed_rule_is_selectable() {
    // Double star on 6 vertices: NIM only under the delta >= k+1 rule.
    let f = edge_file(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]);
    let path = f.path().to_str().unwrap();
    let strict: Value =
        serde_json::from_str(&stdout(&nimtree(&["classify", "--k", "1", "--input", path]))).unwrap();
    let loose: Value = serde_json::from_str(&stdout(&nimtree(&[
        "classify", "--k", "1", "--input", path, "--rule", "k+1",
    ])))
    .unwrap();
    assert_eq!(strict["verdict"], "NotKNim");
    assert_eq!(loose["verdict"], "KNim");
}

#[test]
fn json_output_is_deterministic_and_parses() {
    let args = ["count", "--k", "1", "--n", "20", "--format", "json"];
    let a = nimtree(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_nimtree"))
        .args(args)
        .env("NIMTREE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["counts"][19]["count"], "15507");
}

#[test]
fn profile_spectral_and_skeleton() {
    let f = star(5);
    let path = f.path().to_str().unwrap();
    let p: Value = serde_json::from_str(&stdout(&nimtree(&["profile", "--input", path]))).unwrap();
    assert_eq!(p["path_cover"], 3);
    assert_eq!(p["rpm_set"], serde_json::json!([0]));
    let s: Value = serde_json::from_str(&stdout(&nimtree(&["spectral", "--input", path]))).unwrap();
    assert_eq!(s["achieved"], 3);
    assert_eq!(s["eigenvalues"].as_array().unwrap().len(), 5);
    let k: Value = serde_json::from_str(&stdout(&nimtree(&["skeleton", "--input", path]))).unwrap();
    assert_eq!(k["marks"]["vertices"], 5);
}

#[test]
fn asymptotics_and_recurrence() {
    let a: Value = serde_json::from_str(&stdout(&nimtree(&["asymptotics"]))).unwrap();
    assert!((a["rho"].as_f64().unwrap() - 0.547490482).abs() < 1e-9);
    let r = nimtree(&["recurrence", "--max", "60"]);
    assert_eq!(r.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn series_dump_respects_truncation() {
    let o = nimtree(&["series", "--dump", "atoms", "--trunc", "8"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let degrees: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["i"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![4, 5, 8]);
}

#[test]
fn intermediate_dump_writes_every_series() {
    let dir = tempfile::tempdir().unwrap();
    let o = nimtree(&[
        "count",
        "--k",
        "1",
        "--n",
        "10",
        "--dump-intermediate",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["atoms", "molecules", "symmetric_molecules", "n_total"] {
        let text = std::fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        assert!(serde_json::from_str::<Value>(&text).unwrap().is_array());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(nimtree(&["count", "--k", "0", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        nimtree(&["count", "--k", "1", "--n", "30", "--method", "oracle"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nimtree(&["frobnicate"]).status.code(), Some(2));

    let missing = nimtree(&["classify", "--k", "1", "--input", "/nonexistent/tree.edges"]);
    assert_eq!(missing.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");

    let bad = edge_file(4, &[(0, 1), (1, 2)]);
    let o = nimtree(&["profile", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "tree");

    let spider = edge_file(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
    let o = nimtree(&["skeleton", "--input", spider.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
