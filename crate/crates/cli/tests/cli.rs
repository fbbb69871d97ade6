use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pencil-lab"))
}

fn spec_file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run(spec: &PathBuf, args: &[&str]) -> Run {
    let out = bin().arg("--spec").arg(spec).args(args).env_remove("PENCIL_LAB_THREADS").output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap()
}

#[test]
fn roots_on_e1() {
    let dir = TempDir::new().unwrap();
    let e1 = spec_file(&dir, "e1.json", r#"{"mu":[0],"alpha":[1]}"#);
    let r = run(&e1, &["roots", "--t", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["roots"][0].as_f64(), Some(1.0));
    assert_eq!(v["roots"][1].as_f64(), Some(-1.0));
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!(v["elapsed_seconds"].as_f64().is_some());
    assert!(r.stdout.contains("1.0000000000000000e0"));
}

#[test]
fn excon_on_e2_passes() {
    let dir = TempDir::new().unwrap();
    let e2 = spec_file(&dir, "e2.json", r#"{"mu":[1,-1],"alpha":[1,1]}"#);
    let r = run(&e2, &["excon", "--xi", "1", "--points", "8", "--trials", "50"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["verdict"], "pass");
}

#[test]
fn duplicate_poles_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = spec_file(&dir, "dup.json", r#"{"mu":[2,2],"alpha":[1,1]}"#);
    let r = run(&bad, &["roots", "--t", "0"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert_eq!(r.stderr.lines().count(), 1);
    assert!(r.stderr.contains("DuplicatePole"));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let e1 = spec_file(&dir, "e1.json", r#"{"mu":[0],"alpha":[1]}"#);
    let garbage = spec_file(&dir, "g.json", "{mu:");
    let missing = dir.path().join("absent.json");
    for (spec, args, kind) in [
        (&garbage, vec!["critical"], "InvalidJson"),
        (&missing, vec!["critical"], "Io"),
        (&e1, vec!["roots", "--grid", "1:0:3"], "InvalidGrid"),
        (&e1, vec!["roots"], "InvalidArgument"),
        (&e1, vec!["monodromy", "--vertex", "0,0", "--vertex", "x"], "InvalidComplex"),
        (&e1, vec!["trace", "--t", "inf", "--xi", "1"], "InvalidArgument"),
        (&e1, vec!["monodromy", "--vertex", "0,0", "--vertex", "1,1", "--steps", "64"], "LoopConditionViolated"),
    ] {
        let r = run(spec, &args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stdout);
        assert_eq!(r.stderr.lines().count(), 1);
        assert!(r.stderr.contains(kind), "{args:?}: {}", r.stderr);
    }
}

#[test]
fn failed_verdicts_exit_one() {
    let dir = TempDir::new().unwrap();
    let e2 = spec_file(&dir, "e2.json", r#"{"mu":[1,-1],"alpha":[1,1]}"#);
    // A tolerance no quadrature can meet.
    let r = run(&e2, &["gaussian", "--gamma", "0.5", "--t", "1", "--count", "11", "--half-width", "1"]);
    assert_eq!(r.code, 1);
    assert_eq!(json(&r)["passed"], false);
}

#[test]
fn monodromy_reports() {
    let dir = TempDir::new().unwrap();
    let e1 = spec_file(&dir, "e1.json", r#"{"mu":[0],"alpha":[1]}"#);
    let e2 = spec_file(&dir, "e2.json", r#"{"mu":[1,-1],"alpha":[1,1]}"#);
    let r = run(&e1, &["monodromy", "--center", "0,1.9", "--radius", "2", "--steps", "128"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["permutation"], serde_json::json!([1, 0]));

    let mut args = vec!["monodromy", "--steps", "200"];
    for v in ["0,0", "2,0", "2,2.5", "-2,2.5", "-2,0", "0,0"] {
        args.extend(["--vertex", v]);
    }
    let r = run(&e2, &args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["permutation"], serde_json::json!([2, 0, 1]));

    let r = run(&e1, &["monodromy", "--center", "5,0", "--radius", "1", "--base-angle", "3.141592653589793"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["permutation"], serde_json::json!([0, 1]));
    assert_eq!(v["shift_expected"], false);
}

#[test]
fn critical_on_e1() {
    let dir = TempDir::new().unwrap();
    let e1 = spec_file(&dir, "e1.json", r#"{"mu":[0],"alpha":[1]}"#);
    let v = json(&run(&e1, &["critical"]));
    assert!((v["h"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert!((v["zeros_upper"][0][1].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn csv_tables() {
    let dir = TempDir::new().unwrap();
    let e2 = spec_file(&dir, "e2.json", r#"{"mu":[1,-1],"alpha":[1,1]}"#);
    let r = run(&e2, &["--format", "csv", "roots", "--grid", "-1:1:3"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "t,nu_0,nu_1,nu_2,residual");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("0.0000000000000000e0,1.7320508075688772e0,0.0000000000000000e0,-1.7320508075688772e0"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let e2 = spec_file(&dir, "e2.json", r#"{"mu":[1,-1],"alpha":[1,1]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["--no-timing", "excon", "--xi", "-0.5", "--trials", "20"],
        vec!["--no-timing", "detrep", "--samples", "30", "--seed", "7"],
        vec!["--no-timing", "roots", "--grid", "-3:3:41"],
    ];
    for args in cases {
        let a = run(&e2, &args);
        let b = run(&e2, &args);
        let mut threaded = args.clone();
        threaded.extend(["--threads", "4"]);
        let c = run(&e2, &threaded);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn threads_from_environment() {
    let dir = TempDir::new().unwrap();
    let e1 = spec_file(&dir, "e1.json", r#"{"mu":[0],"alpha":[1]}"#);
    let out = bin()
        .arg("--spec")
        .arg(&e1)
        .args(["roots", "--t", "1"])
        .env("PENCIL_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
