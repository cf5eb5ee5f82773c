//! Golden-file tests for the `dioph` binary.
//!
//! The case table in `common` covers every subcommand and every exit code;
//! each case runs twice and must produce byte-identical output. A few
//! behavioural checks that need no golden file follow.

mod common;

use std::process::Command;

#[test]
fn golden_matrix() {
    let n = common::run_all_cli_cases();
    assert!(n >= 25, "case table shrank to {n}");
    assert_eq!(common::exercised_exit_codes(), vec![0, 1, 2, 3]);
}

#[test]
fn compile_then_check_round_trips_through_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let poly_path = dir.path().join("even.json");

    let out = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["compile", "-", "1"])
        .current_dir(common::manifest_dir())
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write as _;
            child.stdin.take().unwrap().write_all(b"(exists (= (* 2 v0) v1))")?;
            child.wait_with_output()
        })
        .expect("compile run");
    assert!(out.status.success());
    std::fs::write(&poly_path, &out.stdout).expect("write poly");

    let check = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["check", poly_path.to_str().unwrap(), "14", "--bound", "20"])
        .output()
        .expect("check run");
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&check.stdout), "witness: 7\n");

    let odd = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["check", poly_path.to_str().unwrap(), "15", "--bound", "20"])
        .output()
        .expect("check run");
    assert_eq!(odd.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["pell", "--help"][..]] {
        let out = Command::new(env!("CARGO_BIN_EXE_dioph")).args(args).output().expect("run");
        assert_eq!(out.status.code(), Some(0), "args {args:?}");
    }
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["compile", "/nonexistent/f.sexp", "1"])
        .output()
        .expect("run");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: reading"));
}
