use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_banded-darboux");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], report_dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .env("BANDED_DARBOUX_REPORT_DIR", report_dir)
        .output()
        .expect("binary runs")
}

fn config_arg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn report(dir: &Path, stem: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{stem}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn verify_example_a_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--config", &config_arg("example-a.json")], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict: pass"));
    let v = report(dir.path(), "verify-p1-N14-seed0");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["certificate"]["stages"][0]["verdict"], "pass");
    assert!(dir.path().join("verify-p1-N14-seed0.txt").exists());
}

#[test]
fn canonical_p2_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--config", &config_arg("canonical-p2.json")], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v = report(dir.path(), "verify-p2-N16-seed42");
    assert_eq!(v["error"]["kind"], "hypothesis");
    assert_eq!(v["error"]["witness"]["stage"], 0);
    assert_eq!(v["error"]["witness"]["m"], 1);
    assert_eq!(v["error"]["witness"]["delta"], "0");
}

#[test]
fn singular_shift_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["factorize", "--config", &config_arg("example-a.json"), "--C", "2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let v = report(dir.path(), "factorize-p1-N14-seed0");
    assert_eq!(v["error"]["witness"]["singular_minor"], 1);
    assert_eq!(v["config"]["C"], "2");
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["verify", "--config", &config_arg("example-a.json"), "--window", "9"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let missing = dir.path().join("nope.json");
    let out = run(&["gen", "--config", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 1}").unwrap();
    let out = run(&["gen", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn negative_shift_override_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "polys",
            "--config",
            &config_arg("example-a.json"),
            "--C",
            "-1/2",
            "--j",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(dir.path(), "polys-p1-N14-seed0");
    assert_eq!(v["C_used"], "-1/2");
    assert_eq!(v["result"]["sequences"][0]["j"], 1);
}

#[test]
fn every_command_on_random_p3() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["gen", "factorize", "transform", "polys", "verify"] {
        let out = run(&[cmd, "--config", &config_arg("random-p3.json")], dir.path());
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn seeded_runs_are_byte_identical_apart_from_timings() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let out = run(
            &["verify", "--config", &config_arg("random-p2.json"), "--seed", "42"],
            dir,
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let strip = |dir: &Path| {
        let mut v = report(dir, "verify-p2-N16-seed42");
        v.as_object_mut().unwrap().remove("timings");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(a.path()), strip(b.path()));

    let c = tempfile::tempdir().unwrap();
    run(
        &["gen", "--config", &config_arg("random-p2.json"), "--seed", "43"],
        c.path(),
    );
    run(
        &["gen", "--config", &config_arg("random-p2.json"), "--seed", "42"],
        a.path(),
    );
    assert_ne!(
        report(c.path(), "gen-p2-N16-seed43")["result"],
        report(a.path(), "gen-p2-N16-seed42")["result"]
    );
}
