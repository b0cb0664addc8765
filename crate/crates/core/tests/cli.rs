//! The installed binary: exit codes and file round trips.

use std::path::Path;
use std::process::{Command, Output};

fn waveplate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waveplate")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_passes_on_embedded_table() {
    let o = waveplate(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn usage_and_config_errors_exit_1() {
    assert_eq!(waveplate(&["bogus"]).status.code(), Some(1));
    assert_eq!(waveplate(&["solve"]).status.code(), Some(1));
    assert_eq!(waveplate(&["solve", "--preset", "no-such-preset"]).status.code(), Some(1));
    assert_eq!(waveplate(&["solve", "--preset", "fig7-full", "--geometry", "sideways"]).status.code(), Some(1));
}

#[test]
fn malformed_scenario_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "schema = \"waveplate-scenario/1\"\nname = \"x\"\nkind = \"nonsense\"\n").unwrap();
    assert_eq!(waveplate(&["solve", "--scenario", path(&p)]).status.code(), Some(1));
}

#[test]
fn io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(waveplate(&["invert", "--scan", path(&missing)]).status.code(), Some(2));
    assert_eq!(waveplate(&["solve", "--scenario", path(&dir.path().join("none.toml"))]).status.code(), Some(2));
    let nowhere = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        waveplate(&["sweep", "--preset", "fig1-ideal", "--detunings", "4", "--quiet", "--out", path(&nowhere)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn lcr_then_invert_recovers_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.csv");
    let o = waveplate(&["lcr", "--alpha-d", "0.42", "--phi-d-deg", "-135", "--alpha-minus", "0.1", "--out", path(&scan)]);
    assert_eq!(o.status.code(), Some(0));
    let o = waveplate(&["invert", "--scan", path(&scan), "--alpha-minus", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("alpha_d = 0.420000000"), "{text}");
    assert!(text.contains("phi_d_deg = 135.000000000"), "{text}");
}

#[test]
fn sweep_writes_schema_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = waveplate(&["sweep", "--preset", "fig1-ideal", "--detunings", "6", "--workers", "2", "--quiet", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let f = std::io::BufReader::new(std::fs::File::open(&out).unwrap());
    let t = waveplate::doppler::sweep::read_csv(f).unwrap();
    assert_eq!(t.detunings.len(), 6);
    assert!(!dir.path().join("sweep.csv.checkpoint").exists());
}

#[test]
fn exported_table_validates() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t1.csv");
    assert_eq!(waveplate(&["export-table1", "--out", path(&t)]).status.code(), Some(0));
    assert_eq!(waveplate(&["validate", "--table", path(&t)]).status.code(), Some(0));
}
