//! End-to-end CLI checks through the compiled binary: exit codes, output
//! files, and flag precedence over config fields.

use std::fs;
use std::process::Command;

fn scrible() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scrible"))
}

const BODY_JSON: &str = r#"{"A": [[1.0], [-1.0]], "b": [1.0, 1.0]}"#;

fn experiment_json() -> String {
    // Horizon comfortably above the auto-eta applicability gate
    // (T / log T > 8 theta with theta = 2).
    r#"{
        "body": {"A": [[1.0], [-1.0]], "b": [1.0, 1.0]},
        "environment": {"kind": "constant", "vector": [0.5]},
        "horizon": 256,
        "eta": "auto",
        "seed": 3,
        "replications": 2,
        "algorithm": "scrible"
    }"#
    .to_string()
}

#[test]
fn run_writes_outputs_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    fs::write(&config, experiment_json()).unwrap();
    let out = dir.path().join("out");

    let status = scrible()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .arg("--emit-plot-data")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("rep_000.csv").exists());
    assert!(out.join("rep_001.csv").exists());
    assert!(out.join("summary.json").exists());
    assert!(out.join("plot_data.csv").exists());
}

#[test]
fn cli_flags_override_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    fs::write(&config, experiment_json()).unwrap();
    let out = dir.path().join("out");

    let status = scrible()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--replications", "1", "--seed", "9", "--eta", "0.05"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("rep_000.csv").exists());
    assert!(!out.join("rep_001.csv").exists());

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["seed"], 9);
    assert_eq!(summary["config"]["eta"], 0.05);
    assert_eq!(summary["eta_resolved"], 0.05);
    // Fixed eta: the guarantee does not apply.
    assert_eq!(summary["bound_satisfied"], serde_json::Value::Null);
}

#[test]
fn verify_barrier_passes_on_interval() {
    let dir = tempfile::tempdir().unwrap();
    let body = dir.path().join("body.json");
    fs::write(&body, BODY_JSON).unwrap();
    let output = scrible()
        .args(["verify-barrier", "--body"])
        .arg(&body)
        .args(["--samples", "50"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("containment: 50/50 ok"));
}

#[test]
fn check_reduction_reports_equality() {
    let output = scrible()
        .args(["check-reduction", "--n", "1", "--T", "3", "--eta", "0.05"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("equal within 1e-9: true"));
}

#[test]
fn usage_errors_exit_one() {
    let status = scrible().arg("no-such-command").output().unwrap();
    assert_eq!(status.status.code(), Some(1));

    let status = scrible()
        .args(["run", "--config", "/nonexistent.json", "--out", "/tmp/x"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // Invalid n for check-reduction.
    let status = scrible()
        .args(["check-reduction", "--n", "3", "--T", "2", "--eta", "0.05"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn thread_cap_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    fs::write(&config, experiment_json()).unwrap();
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");

    let status = scrible()
        .env("SCRIBLE_THREADS", "1")
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&serial)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let status = scrible()
        .env("SCRIBLE_THREADS", "4")
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&parallel)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // Traces do not depend on the parallelism level.
    for name in ["rep_000.csv", "rep_001.csv"] {
        assert_eq!(
            fs::read(serial.join(name)).unwrap(),
            fs::read(parallel.join(name)).unwrap(),
            "{name} differs across thread caps"
        );
    }

    let status = scrible()
        .env("SCRIBLE_THREADS", "zero")
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&serial)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}
