//! Binary-level behavior: exit codes, report files, the delegated-solver
//! note for q >= 3, and the oracle subcommands.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hidden-shift"))
}

#[test]
fn missing_required_flag_exits_2() {
    let status = bin().args(["bounds", "--q", "2", "--s-size", "2"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("Usage"));
}

#[test]
fn infeasible_config_exits_2() {
    let output = bin()
        .args([
            "periodicity",
            "--q", "2",
            "--n", "6",
            "--s-size", "2",
            "--exhaustive",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("guard"));
}

#[test]
fn passing_run_exits_0_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = bin()
        .args([
            "bounds",
            "--q", "2",
            "--n", "6",
            "--s-size", "2",
            "--m", "30",
            "--trials", "200",
            "--seed", "3",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("PASS"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["experiment"], "bounds");
    assert_eq!(report["trials"].as_array().unwrap().len(), 200);
}

#[test]
fn ternary_end_to_end_notes_delegated_solver() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = bin()
        .args([
            "end-to-end",
            "--q", "3",
            "--n", "2",
            "--s-size", "3",
            "--m", "5",
            "--trials", "10",
            "--seed", "1",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(
        report["aggregate"]["solver_path"],
        "injective-HSP solver delegated"
    );
}

#[test]
fn csv_format_writes_trial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trials.csv");
    let status = bin()
        .args([
            "classical-game",
            "--q", "2",
            "--n", "4",
            "-k", "2",
            "--trials", "50",
            "--seed", "5",
            "--format", "csv",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "bell,eliminated,success,trial");
    assert_eq!(lines.count(), 50);
}

#[test]
fn oracle_generate_inspect_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.json");
    let status = bin()
        .args([
            "oracle", "generate",
            "--q", "2",
            "--n", "4",
            "--s-size", "2",
            "--seed", "9",
            "--generator", "bent",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());

    let output = bin().args(["oracle", "inspect", "--input"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("bent: true"));
    assert!(stdout.contains("periodic: no"));

    // corrupt document: value out of range
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"q":2,"n":1,"range_size":2,"values":[0,5]}"#).unwrap();
    let output = bin().args(["oracle", "inspect", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}
