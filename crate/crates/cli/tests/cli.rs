use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const SWEEP: &str = "\
# Ising pair, left bath heated
model = ising
coupling_delta = 0.5
style = both
grid = temperature
grid_start = 0
grid_stop = 10
grid_points = 6
t_right = 0
";

fn qdiode(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiode"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn qdiode")
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, SWEEP).unwrap();
    let mut files = Vec::new();
    for (run, extra) in [("a", "--jobs=1"), ("b", "--sequential")] {
        let out = dir.path().join(run);
        let o = qdiode(&["sweep", "--config", cfg.to_str().unwrap(), extra], &out);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.pop().unwrap()).unwrap();
    assert!(text.starts_with("# hbar=1, kB=1, energies in units of h"));
    assert!(text.contains("T_L,T_R,J_global,J_local"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn unknown_config_key_exits_with_two() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, format!("{SWEEP}temperature_left = 3\n")).unwrap();
    let o = qdiode(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("temperature_left"));
}

#[test]
fn missing_config_and_bad_flags_exit_with_two() {
    let dir = tempdir().unwrap();
    let missing = dir.path().join("nope.cfg");
    assert_eq!(qdiode(&["sweep", "--config", missing.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(qdiode(&["fig2", "--kappa", "-1"], dir.path()).status.code(), Some(2));
    assert_eq!(qdiode(&["xy-compare", "--spins", "9"], dir.path()).status.code(), Some(2));
    assert_eq!(qdiode(&["fig2", "--style", "sideways"], dir.path()).status.code(), Some(2));
    assert_eq!(qdiode(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn fig2_saturates_and_local_column_vanishes() {
    let dir = tempdir().unwrap();
    let o = qdiode(&["fig2"], dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 5);
    let rows: Vec<Vec<f64>> = rows.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows[0][0], 0.0);
    assert!(rows[0][1..].iter().all(|j| j.abs() < 1e-15));
    let last = rows.last().unwrap();
    assert!((last[3] - 0.125).abs() < 0.02 * 0.125);
    assert!(rows.iter().all(|r| r[4].abs() < 1e-10));
}

#[test]
fn xy_compare_local_only_has_one_current_column() {
    let dir = tempdir().unwrap();
    let o = qdiode(&["xy-compare", "--spins", "2", "--style", "local"], dir.path());
    assert!(o.status.success());
    let text = fs::read_to_string(dir.path().join("xy_compare.csv")).unwrap();
    assert!(text.lines().any(|l| l == "T_L,J_local"));
}
