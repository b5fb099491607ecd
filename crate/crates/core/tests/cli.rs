use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const PETERSEN_G6: &str = "IheA@GUAo\n";
const C5: &str = "c five-cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";
const C6: &str = "p edge 6 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 1\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hedetniemi"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> Output {
    bin().args(args).arg("--input").arg(input).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn invariants_of_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.g6", PETERSEN_G6);
    let out = run(&["invariants", "--format", "graph6"], &path);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(10), Some(15)));
    assert_eq!(v["girth"], 5);
    assert_eq!(v["chi"], 3);
    assert_eq!(v["chi_f"], "5/2");
    let out = run(
        &[
            "product",
            "--kind",
            "strong-kq",
            "--q",
            "1",
            "--format",
            "graph6",
        ],
        &path,
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("p edge 10 15\n"));
}

#[test]
fn forest_has_infinite_girth() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p4.col", "p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n");
    let v = json(&run(&["invariants"], &path));
    assert_eq!(v["girth"], "infinite");
    assert_eq!(
        (v["chi"].as_u64(), v["chi_f"].as_str()),
        (Some(2), Some("2/1"))
    );
}

#[test]
fn invariants_report_timeout_per_field() {
    let dir = tempfile::tempdir().unwrap();
    // C7 ⊠ K3 needs a real search to rule out 6 colors
    let out = bin()
        .args(["product", "--kind", "strong-kq", "--q", "3", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            child
                .stdin
                .take()
                .unwrap()
                .write_all(b"p edge 7 7\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 7\ne 7 1\n")?;
            child.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let path = dir.path().join("c7k3.col");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = run(&["invariants", "--node-budget", "10"], &path);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["chi"]["timeout"], true);
    assert_eq!(v["chi_f"], "7/1");
    assert_eq!(v["girth"], 3);
}

#[test]
fn strong_product_output_is_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c5.col", C5);
    let out = run(&["product", "--kind", "strong-kq", "--q", "2"], &path);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p edge 10 25\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 25);
}

#[test]
fn tensor_product_needs_right_factor() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c5.col", C5);
    let out = run(&["product", "--kind", "tensor"], &path);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "input");
    let right = write(dir.path(), "k2.col", "p edge 2 1\ne 1 2\n");
    let out = bin()
        .args(["product", "--kind", "tensor", "--input"])
        .arg(&path)
        .arg("--right")
        .arg(&right)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("p edge 10 10\n"));
}

#[test]
fn guard_violation_exits_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c5.col", C5);
    let out = run(
        &[
            "product",
            "--kind",
            "strong-kq",
            "--q",
            "3",
            "--guard",
            "10",
        ],
        &path,
    );
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], "resource");
}

#[test]
fn parse_errors_exit_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.col", "p edge 3 1\ne 1 9\n");
    let out = run(&["invariants"], &path);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "parse");
    let detail = v["detail"].as_str().unwrap();
    assert!(
        detail.contains("line 2") && detail.contains("bad.col"),
        "{v}"
    );
}

#[test]
fn verify_on_girth_six_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c6.col", C6);
    let out = run(
        &["verify", "--q", "1", "--seed", "3", "--samples", "2000"],
        &path,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["params"]["c"], 4);
    let names: Vec<&str> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["step"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "girth-hypothesis",
            "fractional-hypothesis",
            "strong-product-bound",
            "clique-m",
            "nu-adjacency",
            "exponential-coloring",
            "color-in-image",
            "robust-classes",
            "final-implications",
            "canonical-coloring"
        ]
    );
    let step = |name: &str| {
        v["steps"]
            .as_array()
            .unwrap()
            .iter()
            .find(|s| s["step"] == name)
            .unwrap()
            .clone()
    };
    assert_eq!(step("girth-hypothesis")["status"], "PASS");
    // C6 is bipartite, so the fractional hypothesis is unmet, which is informational
    assert_eq!(step("fractional-hypothesis")["status"], "FAIL");
    assert_eq!(step("fractional-hypothesis")["kind"], "hypothesis");
    assert_eq!(step("clique-m")["status"], "PASS");
    assert_eq!(step("nu-adjacency")["status"], "PASS");
}

#[test]
fn verify_on_five_cycle_flags_conditional_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c5.col", C5);
    let out = run(&["verify", "--q", "2", "--samples", "500"], &path);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let clique = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["step"] == "clique-m")
        .unwrap();
    assert_eq!(clique["status"], "FAIL");
    assert_eq!(clique["kind"], "conditional");
}

#[test]
fn construct_clique_m_reports_violation_on_c5() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c5.col", C5);
    let out = run(
        &["construct", "clique-m", "--q", "1", "--c", "4", "--v", "1"],
        &path,
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["clique"], false);
    assert_eq!(
        v["violation"]["edge"],
        serde_json::json!(["(3,1)", "(4,1)"])
    );
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn construct_nu_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c6.col", C6);
    let target = dir.path().join("nu.json");
    let out = bin()
        .args([
            "construct",
            "nu",
            "--q",
            "2",
            "--c",
            "7",
            "--v",
            "1",
            "--tau",
            "7",
            "--sigma",
            "5",
            "--input",
        ])
        .arg(&path)
        .arg("--out")
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(v["adjacent_to_mu_tau"], true);
    assert_eq!(
        v["values"],
        serde_json::json!([7, 7, 7, 7, 5, 5, 5, 5, 5, 5, 7, 7])
    );

    let out = run(
        &[
            "construct",
            "nu",
            "--q",
            "2",
            "--c",
            "7",
            "--v",
            "1",
            "--tau",
            "4",
            "--sigma",
            "5",
        ],
        &path,
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "input");
}
