use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pittlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pittlab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn norm_subcommand() {
    let out = pittlab(&["norm", "--f", "chi(0,1)", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["norm"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-8);
    for key in ["modular_at_norm", "bracket_width", "iterations"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let out = pittlab(&["norm", "--f", "exp(-3.14159265*t^2)", "--p", "2"]);
    assert!((json(&out)["norm"].as_f64().unwrap() - 0.8408964).abs() < 1e-7);
    let out = pittlab(&["norm", "--f", "0", "--p", "1.5"]);
    assert_eq!(json(&out)["norm"].as_f64(), Some(0.0));
}

#[test]
fn exit_codes_for_errors() {
    let out = pittlab(&["norm", "--f", "t^", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // |f| = 1/t has no finite modular at any scale.
    let out = pittlab(&["norm", "--f", "1/t", "--p", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ft_subcommand() {
    let out = pittlab(&["ft", "--f0", "chi(0,1)", "--n", "1", "--xi", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() - 4.0 / std::f64::consts::PI).abs() < 1e-8);
    let out = pittlab(&["ft", "--f0", "exp(-3.14159265*t^2)", "--n", "3", "--xi", "1"]);
    assert!((json(&out)["value"].as_f64().unwrap() - 0.0432139).abs() < 1e-7);
    let out = pittlab(&["ft", "--f0", "chi(0,1)", "--n", "1", "--xi", "1"]);
    assert!(json(&out)["value"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn check_subcommand() {
    let out = pittlab(&[
        "check", "--cond", "bp", "--v", "1", "--p", "2", "--alpha", "0", "--n", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "closed_form");
    let out = pittlab(&[
        "check", "--cond", "bp", "--v", "t^4", "--p", "2", "--alpha", "1", "--n", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fails");
    let out = pittlab(&["check", "--cond", "21", "--v", "1", "--p", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn experiment_filter_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        r#"
version = 1
[functions]
gauss = "exp(-3.141592653589793*t^2)"

[[scenarios]]
name = "translation-limit"
kind = "translation_limit"
p = "2"
f = "gauss"
h = [0.0, 5.0]

[[scenarios]]
name = "pitt"
kind = "pitt_verify"
n = 1
p = 2.0
alpha = 0.0
gamma = 0.0
direction = "necessity"
"#,
    );
    let out_dir = dir.path().join("out");
    let out = pittlab(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--scenario",
        "translation-limit",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "PASS translation-limit");
    let mut files: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    files.sort();
    assert_eq!(files, ["translation-limit.csv", "translation-limit.json"]);
    let csv = std::fs::read_to_string(out_dir.join("translation-limit.csv")).unwrap();
    assert!(csv.starts_with("x,y,series\n"));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("translation-limit.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "translation-limit");
    assert_eq!(report["passed"], true);
}

#[test]
fn malformed_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        r#"
version = 1
[[scenarios]]
name = "t"
kind = "translation_limit"
p = "2"
f = "undefined_name"
h = [0.0]
"#,
    );
    let out_dir = dir.path().join("out");
    let out = pittlab(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn failing_scenario_exits_six() {
    let dir = tempfile::tempdir().unwrap();
    // A tolerance of zero cannot be met by a converging sequence.
    let cfg = write(
        dir.path(),
        "f.toml",
        r#"
version = 1
[[scenarios]]
name = "tight"
kind = "translation_limit"
p = "2 - 1/(2*(1+t^2))"
f = "exp(-3.141592653589793*t^2)"
h = [0.0, 1.0]
tolerance = 0.0
"#,
    );
    let out_dir = dir.path().join("out");
    let out = pittlab(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL tight"));
    assert!(out_dir.join("tight.json").exists());
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_pittlab"))
        .args(["norm", "--f", "chi(0,1)", "--p", "2"])
        .env("PITTLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_pittlab"))
        .args(["norm", "--f", "chi(0,1)", "--p", "2"])
        .env("PITTLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
