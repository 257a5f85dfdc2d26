use std::path::Path;
use std::process::{Command, Output};

use msrlab::repair::evenodd_constant_instance;
use msrlab::{construct_tensor_family, FieldSpec, Matrix, MsrSubspaceFamily, RepairScheme};
use serde_json::Value;

fn msrlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msrlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let out = msrlab(&["construct", "--r", "2", "--m", "3", "--p", "3", "--lambda", "2", "--out", path(&f)]);
    assert!(out.status.success());
    let out = msrlab(&["verify", "--in", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("pass k=9 "));
    let out = msrlab(&["bound", "--in", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decay_csv_starts_at_ell_squared() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let csv = dir.path().join("trace.csv");
    assert!(msrlab(&["construct", "--r", "2", "--m", "3", "--out", path(&f)]).status.success());
    let out = msrlab(&["decay", "--in", path(&f), "--order", "random:7", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,I_t,bound_numerator,bound_denominator,pass"));
    assert!(lines.next().unwrap().starts_with("0,64,"));
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn cutset_prints_exact_value() {
    assert_eq!(stdout(&msrlab(&["cutset", "--n", "4", "--k", "2", "--ell", "2"])), "3\n");
    assert_eq!(stdout(&msrlab(&["cutset", "--n", "5", "--k", "2", "--ell", "3"])), "4\n");
    assert_eq!(stdout(&msrlab(&["cutset", "--n", "4", "--k", "1", "--ell", "3"])), "3\n");
    assert_eq!(stdout(&msrlab(&["cutset", "--n", "6", "--k", "2", "--ell", "4"])), "5\n");
    assert_eq!(msrlab(&["cutset", "--n", "4", "--k", "4", "--ell", "2"]).status.code(), Some(2));
}

#[test]
fn selftest_is_byte_identical() {
    let a = msrlab(&["selftest", "--seed", "9"]);
    let b = msrlab(&["selftest", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let j1 = msrlab(&["selftest", "--seed", "9", "--json"]);
    let j2 = msrlab(&["selftest", "--seed", "9", "--json"]);
    assert_eq!(j1.stdout, j2.stdout);
    let v: Value = serde_json::from_slice(&j1.stdout).unwrap();
    assert_eq!(v["seed"], 9);
}

#[test]
fn evenodd_prints_transmissions() {
    let out = msrlab(&["evenodd", "--repair", "s1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("S2 sends b1\n"));
    assert!(text.contains("P1 sends a1 + b1\n"));
    assert!(text.contains("P2 sends a2 + b1\n"));
    assert!(text.contains("download 3 symbols"));
    assert_eq!(msrlab(&["evenodd", "--repair", "x9"]).status.code(), Some(2));
}

#[test]
fn repair_check_on_evenodd_files() {
    let dir = tempfile::tempdir().unwrap();
    let (c, s) = (dir.path().join("c.json"), dir.path().join("s.json"));
    let out = msrlab(&["evenodd", "--repair", "p2", "--write-code", path(&c), "--write-scheme", path(&s)]);
    assert!(out.status.success());
    let out = msrlab(&["repair-check", "--code", path(&c), "--scheme", path(&s)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("downloaded 3 (cutset 3)").count(), 2);
    // EVENODD's scheme is not constant, so extraction is refused
    assert_eq!(msrlab(&["extract", "--code", path(&c), "--scheme", path(&s)]).status.code(), Some(2));
}

#[test]
fn extract_constant_instance() {
    let dir = tempfile::tempdir().unwrap();
    let (code, scheme) = evenodd_constant_instance();
    let (c, s, f) = (dir.path().join("c.json"), dir.path().join("s.json"), dir.path().join("f.json"));
    std::fs::write(&c, serde_json::to_string(&code).unwrap()).unwrap();
    std::fs::write(&s, serde_json::to_string(&RepairScheme::Constant(scheme)).unwrap()).unwrap();
    let out = msrlab(&["extract", "--code", path(&c), "--scheme", path(&s), "--out", path(&f)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let fam: MsrSubspaceFamily = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(fam.k(), 1);
    assert_eq!(msrlab(&["verify", "--in", path(&f)]).status.code(), Some(0));
}

#[test]
fn broken_family_reports_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    let fam = construct_tensor_family(2, 1, FieldSpec::new(3).unwrap(), 2).unwrap();
    let mut json: Value = serde_json::to_value(&fam).unwrap();
    json["maps"][0][0] = serde_json::to_value(Matrix::identity(fam.field(), 2)).unwrap();
    std::fs::write(&f, json.to_string()).unwrap();
    let out = msrlab(&["verify", "--in", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "fail");
    assert_eq!(report["details"]["direct_sum_failures"], serde_json::json!([0]));
    assert!(report["replay"].as_str().unwrap().contains("verify --in"));
    // the report carries the instance itself
    let replayed: MsrSubspaceFamily = serde_json::from_value(report["instance"].clone()).unwrap();
    assert!(!replayed.verify().unwrap().passed);
    // decay refuses an unverified family
    assert_eq!(msrlab(&["decay", "--in", path(&f)]).status.code(), Some(2));
}

#[test]
fn sweep_tables() {
    let out = msrlab(&["sweep", "--r", "2", "--m", "1,2,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let ks: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(ks, ["3", "6", "9", "12"]);
    let out = msrlab(&["sweep", "--r", "3", "--m", "2", "--format", "json", "--verify"]);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["k_construct"], 8);
    assert!((rows[0]["bound"].as_f64().unwrap() - 26.367).abs() < 1e-3);
    assert_eq!(rows[0]["verified"], true);
    assert_eq!(msrlab(&["sweep", "--r", "3", "--m", "5"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(msrlab(&["construct", "--r", "2"]).status.code(), Some(2));
    assert_eq!(msrlab(&["construct", "--r", "2", "--m", "1", "--p", "2"]).status.code(), Some(2));
    assert_eq!(msrlab(&["verify", "--in", "/nonexistent/f.json"]).status.code(), Some(2));
    assert_eq!(msrlab(&["nosuch"]).status.code(), Some(2));
}
