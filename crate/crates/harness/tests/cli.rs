use std::path::Path;
use std::process::Command;

use mfc_harness::{write_config, ExperimentConfig, Signal};

fn mfc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mfc")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_paper_prints_a_valid_config() {
    let out = mfc(&["demo-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let cfg: ExperimentConfig = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg, ExperimentConfig::pendulum_default());
}

#[test]
fn run_then_metrics_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let log_path = dir.path().join("log.csv");
    let mut cfg = ExperimentConfig::pendulum_default();
    cfg.horizon = 25.0;
    write_config(&cfg, &cfg_path).unwrap();

    let out = mfc(&["run", path_str(&cfg_path), "--out", path_str(&log_path), "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("log.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 4);

    let out = mfc(&["metrics", path_str(&log_path), "--cutoff", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["samples_after_cutoff"], 251);

    let out = mfc(&["metrics", path_str(&log_path), "--cutoff", "90"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, "{\"horizon\": 1.0, \"mystery\": true}").unwrap();
    let out = mfc(&["run", path_str(&cfg_path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let out = mfc(&["run", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn divergence_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let log_path = dir.path().join("log.csv");
    let mut cfg =
        ExperimentConfig::synthetic_default(Signal::Constant { value: 0.0 }, Signal::Constant { value: 0.0 });
    cfg.oracle_f_offset = 1e307;
    write_config(&cfg, &cfg_path).unwrap();
    let out = mfc(&["run", path_str(&cfg_path), "--oracle-f", "--out", path_str(&log_path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(std::fs::read_to_string(&log_path).unwrap().contains("# diverged at step"));
}

#[test]
fn no_noise_flag_removes_measurement_noise() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    let log_path = dir.path().join("log.csv");
    let mut cfg = ExperimentConfig::pendulum_default();
    cfg.horizon = 21.0;
    write_config(&cfg, &cfg_path).unwrap();
    let out = mfc(&["run", path_str(&cfg_path), "--no-noise", "--out", path_str(&log_path)]);
    assert_eq!(out.status.code(), Some(0));
    for r in mfc_harness::read_log_csv(&log_path).unwrap() {
        assert_eq!(r.y_meas, r.y_true);
    }
}
