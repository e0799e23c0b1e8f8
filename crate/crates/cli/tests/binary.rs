use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn vvwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vvwave")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn stdout(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

#[test]
fn zero_horizon_writes_the_initial_row_only() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", "[grid]\nmodes = 16\n[time]\nhorizon = 0.0\n[run]\noutput_dir = \"o\"\n");
    let out = vvwave(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let csv = fs::read_to_string(tmp.path().join("o/simulate/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    assert!(csv.lines().nth(1).unwrap().starts_with("0,"));
}

#[test]
fn linear_energy_check_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("linear.toml");
    let out = vvwave(tmp.path(), &["energy-check", "--config", cfg.to_str().unwrap(), "--output-dir", "e"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = json(&tmp.path().join("e/energy-check/report.json"));
    assert_eq!(report["passed"], true);
    let residual = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "energy_identity_residual")
        .expect("residual check")["measured"]
        .as_f64()
        .unwrap();
    assert!(residual <= 1e-6, "{residual}");
}

#[test]
fn inactive_cutoff_reproduces_the_limit_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.toml",
        "[grid]\nmodes = 16\n[time]\nhorizon = 0.05\ndt = 1e-3\n[cutoff]\nk = 1e9\n[run]\noutput_dir = \"o\"\n",
    );
    let out = vvwave(tmp.path(), &["cutoff-check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(tmp.path().join("o/cutoff-check/cutoff.csv").exists());
}

#[test]
fn invalid_config_exits_with_two_and_lists_issues() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "c.toml", "[grid]\nmodes = 0\n[time]\ndt = 0.3\n");
    let out = vvwave(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("grid.modes") && text.contains("time.dt"), "{text}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn blow_up_is_reported_with_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.toml",
        r#"
        [grid]
        modes = 64
        [physics]
        nu = 0.0
        [speed]
        kind = "constant"
        c0 = 3.0
        [time]
        horizon = 1.0
        dt = 0.01
        [initial]
        kind = "fourier-modes"
        r = [{ k = 30, sin = 5.0 }]
        s = [{ k = 30, cos = 5.0 }]
        [run]
        output_dir = "o"
        "#,
    );
    let out = vvwave(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let report = json(&tmp.path().join("o/simulate/report.json"));
    assert_eq!(report["passed"], false);
    assert!(report["error"].as_str().unwrap().contains("blow"), "{report}");
}

#[test]
fn manifest_hash_matches_the_recorded_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("tabulated.toml");
    let out = vvwave(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--output-dir", "a", "--dt", "1e-3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let manifest = json(&tmp.path().join("a/simulate/manifest.json"));
    let compact = serde_json::to_string(&manifest["config"]).unwrap();
    assert_eq!(manifest["config_sha256"].as_str().unwrap(), hex(&Sha256::digest(compact.as_bytes())));
    assert_eq!(manifest["subcommand"], "simulate");
}

#[test]
fn rerun_from_written_config_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("tabulated.toml");
    let out = vvwave(tmp.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--output-dir", "a", "--dt", "1e-3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let first = tmp.path().join("a/simulate");
    let out = vvwave(&first, &["simulate", "--config", "config.toml", "--output-dir", "../../b"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let second = tmp.path().join("b/simulate");
    for name in ["trajectory.csv", "final_r.csv", "final_s.csv"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "c.toml",
        "[time]\nhorizon = 0.02\ndt = 1e-3\n[ensemble]\npaths = 8\norders = [8, 16]\n",
    );
    let c = cfg.to_str().unwrap();
    for (w, dir) in [("1", "w1"), ("2", "w2")] {
        let out = vvwave(tmp.path(), &["ensemble", "--config", c, "--workers", w, "--output-dir", dir]);
        assert!(out.status.code() == Some(0) || out.status.code() == Some(1), "{}", stdout(&out));
    }
    for name in ["paths.csv", "moments.csv", "ratios.csv", "report.json"] {
        let a = fs::read(tmp.path().join("w1/ensemble").join(name)).unwrap();
        let b = fs::read(tmp.path().join("w2/ensemble").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
