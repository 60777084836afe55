use std::path::Path;
use std::process::{Command, Output};

fn exksc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exksc"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        exksc(d.path(), &["verify", "--trials", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(exksc(d.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        exksc(
            d.path(),
            &["sweep-basic", "--rounds", "10", "--window", "100"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        exksc(d.path(), &["exk-cases", "--cases", "V"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        exksc(d.path(), &["capacity", "--config", "missing.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn print_config_echoes_overrides() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("c.json"), r#"{"runs": 7, "rounds": 5000}"#).unwrap();
    let out = exksc(
        d.path(),
        &[
            "sweep-basic",
            "--config",
            "c.json",
            "--rounds",
            "6000",
            "--print-config",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["runs"], 7);
    assert_eq!(v["rounds"], 6000);
    assert_eq!(v["window"], 1000);
    assert!(!d.path().join("sweep-basic.csv").exists());
}

#[test]
fn capacity_writes_csv_and_summary() {
    let d = tempfile::tempdir().unwrap();
    let out = exksc(
        d.path(),
        &["capacity", "--eps1", "0.5,0,0.11", "--out", "sub/cap.csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(d.path().join("sub/cap.csv")).unwrap();
    assert_eq!(csv, "eps1,capacity\n0.5,0\n0,1\n0.11,0.500084\n");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("sub/cap.json")).unwrap())
            .unwrap();
    assert_eq!(v["command"], "capacity");
    assert!(v["version"].as_str().unwrap().starts_with('v'));
    assert_eq!(v["config"]["eps1_grid"][2], 0.11);
}

#[test]
fn sweep_rows_cover_the_grid() {
    let d = tempfile::tempdir().unwrap();
    let out = exksc(
        d.path(),
        &[
            "sweep-basic",
            "--eps1",
            "0,0.5",
            "--eps2",
            "0,0.25,0.5",
            "--runs",
            "3",
            "--rounds",
            "2000",
            "--svg",
            "--out",
            "b.csv",
        ],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let csv = std::fs::read_to_string(d.path().join("b.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eps1,eps2,run,srsa_mean,srsa_var");
    assert_eq!(lines.len(), 1 + 6 * (3 + 1));
    assert!(lines[4].starts_with("0,0,all,"));
    assert!(lines.last().unwrap().starts_with("0.5,0.5,all,"));
    assert!(d.path().join("b.svg").exists());
}

#[test]
fn exk_cases_columns_and_status() {
    let d = tempfile::tempdir().unwrap();
    let out = exksc(
        d.path(),
        &[
            "exk-cases",
            "--cases",
            "I,II",
            "--runs",
            "2",
            "--rounds",
            "4000",
            "--out",
            "c.csv",
        ],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let csv = std::fs::read_to_string(d.path().join("c.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "case,round,mean,variance");
    assert_eq!(lines.len(), 1 + 2 * 4);
    assert!(lines[1].starts_with("I,1000,"));
    assert!(lines[8].starts_with("II,4000,"));
}

#[test]
fn verify_reports_every_suite() {
    let d = tempfile::tempdir().unwrap();
    let out = exksc(
        d.path(),
        &["verify", "--trials", "20", "--sizes", "2", "--out", "v.csv"],
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PASS decomposition/size2 20/20"));
    let csv = std::fs::read_to_string(d.path().join("v.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + exksc::experiments::SUITES.len());
    // a failing suite makes the whole run report failure
    let any_fail = stdout.lines().any(|l| l.starts_with("FAIL"));
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
}
