//! End-to-end tests of the `qescli` binary: exit-code contract, artifact
//! round-trips, and corruption detection.

use std::path::Path;
use std::process::{Command, Output};

fn qescli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qescli"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("qescli spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn solve_oracle_to(path: &Path, n: &str) {
    let out = qescli(&[
        "solve",
        "--m",
        "1",
        "--zalpha",
        "0.3",
        "--l",
        "-1",
        "--n",
        n,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn verify_algebra_passes_and_reports() {
    let out = qescli(&["verify-algebra"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"), "got:\n{text}");
    assert!(text.contains("all checks pass"));
}

#[test]
fn verify_algebra_fixed_rational_n() {
    let out = qescli(&["verify-algebra", "--n", "5/2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("overall: PASS"));
}

#[test]
fn malformed_n_is_a_usage_error() {
    let out = qescli(&["verify-algebra", "--n", "two"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("integer or a fraction"));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = qescli(&["solve", "--m", "1", "--zalpha", "0.3", "--l", "-1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fractional_degree_is_a_usage_error() {
    let out = qescli(&["solve", "--m", "1", "--zalpha", "0.3", "--l", "-1", "--n", "1.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn supercritical_coupling_is_a_physics_rejection() {
    let out = qescli(&["solve", "--m", "1", "--zalpha", "0.6", "--l", "-1", "--n", "0"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("invalid physical context"));
}

#[test]
fn empty_sector_warns_and_yields_an_empty_artifact() {
    // l = 0 at n = 0 closes only at x0^2 = -ell_minus < 0, so no point exists.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    let out = qescli(&[
        "solve",
        "--m",
        "1",
        "--zalpha",
        "0.3",
        "--l",
        "0",
        "--n",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("no spectral points"));
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "[]");

    let check = qescli(&["check", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&check), 0);
    assert!(stdout(&check).contains("checked 0 records"));
    assert!(stderr(&check).contains("holds no records"));
}

#[test]
fn solve_then_check_round_trip_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n1.json");
    solve_oracle_to(&path, "1");
    let out = qescli(&["check", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(text.contains("checked 1 record(s), 0 failure(s)"));
}

#[test]
fn strict_check_reproduces_stored_residuals_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n2.json");
    solve_oracle_to(&path, "2");
    let out = qescli(&["check", "--strict", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stdout:\n{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("bit for bit"), "got:\n{text}");
    assert!(text.contains("checked 3 record(s), 0 failure(s)"));
}

#[test]
fn corrupting_a_stored_energy_fails_the_audit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n0.json");
    solve_oracle_to(&path, "0");

    // Nudge the stored energy in its sixth significant digit; everything else
    // stays mutually consistent, so only energy-dependent checks should trip.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let energy = &mut doc[0]["point"]["energy"];
    let e = energy.as_f64().unwrap();
    *energy = serde_json::json!(e * (1.0 + 1e-6));
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = qescli(&["check", "--strict", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = stdout(&out);
    assert!(report.contains("FAIL"), "got:\n{report}");
    assert!(report.contains("dirac_max"), "got:\n{report}");
    assert!(report.contains("checked 1 record(s), 1 failure(s)"));
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let out = qescli(&["check", "--in", "/nonexistent/sols.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = qescli(&["check", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot parse"));
}

#[test]
fn wavefunction_tabulates_requested_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n0.json");
    solve_oracle_to(&path, "0");
    let out = qescli(&[
        "wavefunction",
        "--in",
        path.to_str().unwrap(),
        "--index",
        "0",
        "--samples",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "header plus two rows, got:\n{text}");
    assert_eq!(lines[0], "r,x,F,G");
}

#[test]
fn wavefunction_index_out_of_range_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n0.json");
    solve_oracle_to(&path, "0");
    let out = qescli(&[
        "wavefunction",
        "--in",
        path.to_str().unwrap(),
        "--index",
        "5",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&qescli(&["--help"])), 0);
    assert_eq!(code(&qescli(&["--version"])), 0);
    assert_eq!(code(&qescli(&["solve", "--help"])), 0);
}
