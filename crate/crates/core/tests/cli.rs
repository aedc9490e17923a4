use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wncs"))
}

fn desk() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/desk.toml")
}

#[test]
fn shipped_configs_parse() {
    for name in ["desk", "scalar_full", "vector_full"] {
        let p = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../configs/{name}.toml"));
        wncs::harness::ExperimentConfig::from_path(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["simulate", "--config", "x.toml", "--out", "y.csv", "--decoder", "viterbi"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(bin().arg("--help").output().unwrap().status.success());
}

#[test]
fn missing_config_names_the_path() {
    let out = bin().args(["bounds", "--config", "/nonexistent/cfg.toml", "--out", "/tmp/never.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/cfg.toml"));
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(desk()).unwrap().replace("n_bits = 8", "n_bits = 7");
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = bin().args(["bounds", "--config"]).arg(&cfg).args(["--out"]).arg(dir.path().join("b.csv")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("code.k"));
}

#[test]
fn bounds_mode_writes_bound_columns_only() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("b.csv");
    let st = bin()
        .args(["bounds", "--config"])
        .arg(desk())
        .args(["--snr-db=-4,-2", "--out"])
        .arg(&out_csv)
        .status()
        .unwrap();
    assert!(st.success());
    let t = wncs::harness::read_csv_table(&out_csv).unwrap();
    assert_eq!(t.headers, wncs::harness::BOUND_COLUMNS);
    assert_eq!(t.rows.len(), 2);
    assert!(dir.path().join("b.csv.meta.toml").exists());

    let merged = bin().arg("report").arg(&out_csv).output().unwrap();
    assert!(merged.status.success());
    let text = String::from_utf8(merged.stdout).unwrap();
    assert!(text.starts_with("# snr_db t1_lb"));
    assert_eq!(text.lines().count(), 3);
}
