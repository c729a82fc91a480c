use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn floquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn pendant_potentials(dir: &TempDir) -> (String, String) {
    (
        write(dir, "zero.pot", "vertices 2\n"),
        write(
            dir,
            "mtwo-two.pot",
            "vertices 2\npotential 0 -2\npotential 1 2\n",
        ),
    )
}

#[test]
fn kagome_invariants_json() {
    let o = floquet(&["invariants", "--graph", "kagome", "--max-n", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["n"] == 3 && e["m"] == serde_json::json!([1, 0]))
        .unwrap();
    let terms = entry["poly"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["coeff"], "1");
    assert_eq!(terms[0]["exps"], serde_json::json!([1, 0, 0]));
    assert_eq!(terms[1]["exps"], serde_json::json!([0, 1, 0]));
    let i3 = &v["marginals"][2]["poly"];
    assert_eq!(i3.as_array().unwrap().len(), 6);
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["invariants", "--graph", "zd:2,2", "--max-n", "4", "--json"];
    assert_eq!(floquet(&args).stdout, floquet(&args).stdout);
    let args = ["cycles", "--graph", "kagome", "--length", "4", "--json"];
    assert_eq!(floquet(&args).stdout, floquet(&args).stdout);
}

#[test]
fn isospectral_modes() {
    let dir = TempDir::new().unwrap();
    let (zero, other) = pendant_potentials(&dir);
    let o = floquet(&[
        "isospectral",
        "--graph",
        "pendant",
        "--q1",
        &zero,
        "--q2",
        &other,
        "--mode",
        "periodic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = floquet(&[
        "isospectral",
        "--graph",
        "pendant",
        "--q1",
        &zero,
        "--q2",
        &other,
        "--mode",
        "floquet",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isospectral"], false);
    assert_eq!(v["witness"]["n"], 2);
    assert_eq!(v["witness"]["m"], serde_json::json!([1]));
    assert_eq!(v["witness"]["q1_value"], "0");
    assert_eq!(v["witness"]["q2_value"], "-2");
}

#[test]
fn verify_trace_writes_csv() {
    let dir = TempDir::new().unwrap();
    let pot = write(
        &dir,
        "q.pot",
        "vertices 3\npotential 0 1\npotential 1 2\npotential 2 3\n",
    );
    let csv = dir.path().join("out.csv");
    let o = floquet(&[
        "verify-trace",
        "--graph",
        "kagome",
        "--potential",
        &pot,
        "--max-n",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-9);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,k1,k2,lhs_re,lhs_im,rhs,residual,rhs_im")
    );
    assert_eq!(lines.count(), 3 * (64 + 16));
}

#[test]
fn verify_trace_failure_exit_code() {
    let dir = TempDir::new().unwrap();
    let pot = write(
        &dir,
        "q.pot",
        "vertices 2\npotential 0 1/2\npotential 1 -1/3\n",
    );
    // Rounding error alone exceeds a tolerance this small.
    let o = floquet(&[
        "verify-trace",
        "--graph",
        "pendant",
        "--potential",
        &pot,
        "--tol",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("FAIL"));
    let o = floquet(&[
        "verify-trace",
        "--graph",
        "pendant",
        "--potential",
        &pot,
        "--tol=-1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = floquet(&["verify-trace", "--graph", "pendant", "--potential", &pot]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn embedded_potential_is_used() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "p.graph",
        "dim 1\nvertices 2\nedge 0 1 0\nedge 0 0 1\npotential 0 1/2\n",
    );
    let o = floquet(&["verify-trace", "--graph", &g, "--json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn builtin_emit_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("k.graph");
    let o = floquet(&["builtin", "kagome", "--emit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let from_file = floquet(&["invariants", "--graph", path.to_str().unwrap(), "--json"]);
    let builtin = floquet(&["invariants", "--graph", "kagome", "--json"]);
    assert_eq!(from_file.stdout, builtin.stdout);

    let o = floquet(&["builtin", "zd", "3,3", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], 9);
    assert_eq!(v["edges"], 18);
    let o = floquet(&["builtin", "cycle", "5"]);
    assert!(stdout(&o).starts_with("dim 1\nvertices 5\n"));
}

#[test]
fn cycles_listing() {
    let o = floquet(&[
        "cycles", "--graph", "pendant", "--length", "2", "--index", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[2,4] len=2 index=(1) weight=q0^1\n");
    let o = floquet(&[
        "cycles", "--graph", "kagome", "--length", "2", "--index", "1,0", "--base",
    ]);
    assert_eq!(stdout(&o), "[0,2] len=2 index=(1,0) weight=1\n");
    let o = floquet(&[
        "cycles",
        "--graph",
        "kagome",
        "--length",
        "2",
        "--index=-1,0",
        "--base",
    ]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn zd_fourier_reports_residuals() {
    let dir = TempDir::new().unwrap();
    let pot = write(
        &dir,
        "q.pot",
        "vertices 6\npotential 0 1\npotential 3 -2/3\npotential 5 5/7\n",
    );
    let o = floquet(&["zd-fourier", "--p", "3,2", "--potential", &pot, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["invariants"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["residual"].as_f64().unwrap() < 1e-9));
}

#[test]
fn input_errors_exit_two() {
    let o = floquet(&["invariants", "--graph", "no-such-graph"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-graph"));
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.graph",
        "dim 1\nvertices 2\nedge 0 0 0\nedge 0 1 0\n",
    );
    let o = floquet(&["invariants", "--graph", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = floquet(&["invariants", "--graph", "pendant", "--max-n", "20"]);
    assert_eq!(o.status.code(), Some(2));
    let o = floquet(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new("zero.pot").exists());
}
