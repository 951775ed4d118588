use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attenuated")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

const SMALL: [&str; 8] = ["-q", "2", "-n", "3", "-l", "2", "-m", "2"];

fn with(head: &[&str], tail: &[&str]) -> Vec<String> {
    head.iter().chain(SMALL.iter()).chain(tail).map(|s| s.to_string()).collect()
}

fn run_owned(args: Vec<String>) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

#[test]
fn build_reports_vertices() {
    let o = run_owned(with(&["build"], &[]));
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["vertices"], 112);
    // 1 + 9 + 24 + 6 + 72
    let total: u64 = v["valencies"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 112);
}

#[test]
fn trivial_scheme_has_one_vertex() {
    let o = run(&["build", "-q", "2", "-n", "0", "-l", "0", "-m", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["vertices"], 1);
}

#[test]
fn unsupported_field_is_a_usage_error() {
    let o = run(&["build", "-q", "6", "-n", "3", "-l", "2", "-m", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("field not in table"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["verify", "-q", "2"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run_owned(with(&["build"], &["--colour"]))), 1);
    assert_eq!(code(&run_owned(with(&["verify"], &["--bases", "112"]))), 1);
    assert_eq!(code(&run(&["limit", "-p", "2", "-r", "2", "-n", "3", "-m", "2"])), 1);
}

#[test]
fn round_trip_through_a_scheme_file() {
    let dir = std::env::temp_dir().join(format!("attenuated-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.txt");
    let p = path.to_str().unwrap();
    assert_eq!(code(&run_owned(with(&["build"], &["-o", p]))), 0);
    let o = run(&["verify", "--input", p, "--scope", "structure", "--no-timings"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["params"]["vertices"], 112);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scoped_verification_passes() {
    for scope in ["spectra", "bispectral", "structure", "subconstituent"] {
        let o = run_owned(with(&["verify"], &["--scope", scope, "--no-timings"]));
        assert_eq!(code(&o), 0, "{scope}: {}", String::from_utf8_lossy(&o.stdout));
        let v = json(&o);
        assert_eq!(v["schema_version"], 1);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    }
}

#[test]
fn johnson_scope_reports_the_known_failures() {
    let o = run_owned(with(&["verify"], &["--scope", "johnson", "--format", "csv", "--no-timings"]));
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("johnson.eigenvalues,pass"));
    assert!(text.contains("johnson.binary,pass"));
    assert!(text.contains("johnson.embedding,fail"));
    assert!(text.contains("johnson.limit,fail"));
}

#[test]
fn poisoned_tables_are_caught() {
    for (fixture, check) in [("poisoned-p", "structure.p_formula"), ("poisoned-q", "structure.q_formula")] {
        let o = run_owned(with(&["verify"], &["--scope", "structure", "--fixture", fixture, "--no-timings"]));
        assert_eq!(code(&o), 2);
        let v = json(&o);
        let failed: Vec<&str> =
            v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").map(|c| c["name"].as_str().unwrap()).collect();
        assert!(failed.contains(&check), "{fixture}: {failed:?}");
    }
}

#[test]
fn reports_are_deterministic_without_timings() {
    let a = run_owned(with(&["verify"], &["--scope", "spectra", "--no-timings", "--threads", "1"]));
    let b = run_owned(with(&["verify"], &["--scope", "spectra", "--no-timings", "--threads", "3"]));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("millis"));
}

#[test]
fn eigen_table_has_one_row_per_pair() {
    let o = run_owned(with(&["tables"], &["--kind", "eigen", "--format", "csv"]));
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,r,s,T,U"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn polynomial_table_lists_v() {
    let o = run_owned(with(&["tables"], &["--kind", "v", "--format", "csv"]));
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "1,0,x"));
    assert!(text.lines().any(|l| l == "0,1,y"));
}

#[test]
fn limit_reports_every_entry() {
    let o = run(&["limit", "-p", "2", "-r", "3", "-n", "3", "-m", "2", "--no-timings"]);
    let v = json(&o);
    // 5 eigen indices: 25 T, 25 U and the cardinality
    assert_eq!(v["entries"].as_array().unwrap().len(), 51);
    let card = v["entries"].as_array().unwrap().iter().find(|e| e["kind"] == "cardinality").unwrap();
    assert_eq!(card["target"], "12");
    assert_eq!(code(&o), if v["passes"] == true { 0 } else { 2 });
}

#[test]
fn embed_lists_violations() {
    let o = run(&["embed", "-q", "2", "-n", "3", "-l", "1", "-m", "2", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 12);
    assert!(text.lines().any(|l| l == "0,3,0,2,0,1"));
}
