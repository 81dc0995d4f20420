use std::path::Path;
use std::process::{Command, Output};

use tba_exact::output::parse_csv;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tba-exact"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_su2k_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k1.csv");
    let o = run(&["solve", "--model", "su2k", "--k", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(table.columns, ["theta", "reA", "imA", "reB", "imB"]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("k1.report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    for key in ["iterations", "damping", "residual"] {
        assert!(report.get(key).is_some());
    }
}

#[test]
fn negative_level_is_a_usage_error() {
    let o = run(&["solve", "--model", "su2k", "--k", "-1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("k >= 0"), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_one() {
    assert_eq!(code(&run(&["solve", "--damping", "1.5"])), 1);
    assert_eq!(code(&run(&["verify", "--tol", "0"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["dump", "--fn", "nope"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn solve_su3_plateau() {
    let o = run(&["solve", "--model", "su3", "--step", "0.025"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(t.columns.len(), 9);
    let (re, im) = (t.column("reB").unwrap()[0], t.column("imB").unwrap()[0]);
    assert!((re + 0.75).abs() < 1e-5 && (im + 0.25).abs() < 1e-5, "{re} {im}");
    let (re, im) = (t.column("reB0b").unwrap()[0], t.column("imB0b").unwrap()[0]);
    assert!((re + 0.75).abs() < 1e-5 && (im - 0.25).abs() < 1e-5, "{re} {im}");
}

#[test]
fn solver_failure_exits_two() {
    // such weak damping cannot reach the tolerance within the iteration cap
    let o = run(&[
        "solve", "--model", "su2k", "--k", "1", "--damping", "0.001", "--tol", "1e-12", "--theta-min", "-20", "--theta-max",
        "4", "--step", "0.2",
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["converged"], false);
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--model", "su2k", "--k", "2", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["verify", "--model", "su3", "--tol", "1e-5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["verify", "--model", "su2k", "--k", "2", "--tol", "1e-30"]);
    assert_eq!(code(&o), 3);
    let sups: Vec<f64> = stdout(&o).lines().skip(2).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(sups.len(), 2);
    assert!(sups.iter().all(|s| *s > 0.0 && *s < 1e-6));
    assert!(stderr(&o).contains("FAIL A"));
}

#[test]
fn relations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = run(&["relations", "--suite", "all", "--seed", "42", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    let v: Vec<serde_json::Value> = serde_json::from_slice(&a).unwrap();
    assert!(v.iter().all(|r| r["passed"] == true && r["seed"] == 42));
}

#[test]
fn index_k1() {
    let o = run(&["index", "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = parse_csv_mixed(&stdout(&o));
    for row in t {
        assert!((row.0 - 1.0 / 3.0).abs() < 1e-6 && (row.1 - 1.0 / 3.0).abs() < 1e-15);
    }
}

/// `(numeric, exact)` pairs of the index table (the method column is text).
fn parse_csv_mixed(s: &str) -> Vec<(f64, f64)> {
    s.lines()
        .skip(2)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[3].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect()
}

#[test]
fn dump_b_plateau() {
    let o = run(&["dump", "--model", "su2k", "--k", "1", "--fn", "B"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = parse_csv(&stdout(&o)).unwrap();
    let theta = t.column("theta").unwrap();
    let re = t.column("re").unwrap();
    assert!((re[0] + 1.0 / 3f64.sqrt()).abs() < 1e-5);
    let i = theta.iter().position(|x| (x + 10.0).abs() < 1e-9).unwrap();
    let cf = tba_exact::ClosedFormSolution::su2k(1.0).unwrap();
    let b = cf.su2k_pair(num_complex::Complex64::new(theta[i], 0.0)).unwrap().1;
    assert_eq!(re[i], b.re);
}

#[test]
fn dump_json_has_columns() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.json");
    let o = run(&[
        "dump", "--model", "su3", "--fn", "B0", "--theta-min", "-5", "--theta-max", "1", "--step", "0.05", "--format",
        "json", "--out", p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&p)).unwrap()).unwrap();
    assert_eq!(v["theta"].as_array().unwrap().len(), 121);
}
