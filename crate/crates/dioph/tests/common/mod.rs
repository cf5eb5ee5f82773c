//! Shared driver for the CLI golden tests.
//!
//! Each case runs the `dioph` binary twice with the same arguments from the
//! crate root, asserts the two runs are byte-identical, checks the exit
//! code, and compares the captured streams against files under
//! `tests/golden/cli/`. Set `DIOPH_REGEN_GOLDEN=1` to rewrite the golden
//! files from the current output instead of comparing.

// Each test target pulls in its own slice of this module.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests/golden")
}

pub fn regen() -> bool {
    std::env::var_os("DIOPH_REGEN_GOLDEN").is_some()
}

#[derive(Clone, Copy)]
pub struct CliCase {
    /// Golden file stem under `tests/golden/cli/`.
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: Option<&'static str>,
    pub exit: i32,
    /// Compare stdout against `<name>.stdout`.
    pub golden_stdout: bool,
    /// Compare stderr against `<name>.stderr`.
    pub golden_stderr: bool,
}

const CASE: CliCase = CliCase {
    name: "",
    args: &[],
    stdin: None,
    exit: 0,
    golden_stdout: true,
    golden_stderr: false,
};

/// Every subcommand, every exit code, text and JSON forms.
pub fn cli_cases() -> Vec<CliCase> {
    let err = CliCase { golden_stdout: false, golden_stderr: true, ..CASE };
    vec![
        CliCase { name: "pell_value", args: &["pell", "2", "2"], ..CASE },
        CliCase { name: "pell_zero", args: &["pell", "2", "0"], ..CASE },
        CliCase { name: "pell_value_json", args: &["--json", "pell", "2", "2"], ..CASE },
        CliCase { name: "pell_enumerate", args: &["pell", "2", "--enumerate", "100"], ..CASE },
        CliCase {
            name: "pell_enumerate_json",
            args: &["--json", "pell", "2", "--enumerate", "100"],
            ..CASE
        },
        CliCase { name: "pell_index", args: &["pell", "2", "--index", "7", "4"], ..CASE },
        CliCase {
            name: "pell_index_json",
            args: &["--json", "pell", "2", "--index", "7", "4"],
            ..CASE
        },
        CliCase {
            name: "pell_index_miss",
            args: &["pell", "2", "--index", "7", "5"],
            exit: 1,
            ..CASE
        },
        CliCase { name: "pell_bad_base", args: &["pell", "1", "1"], exit: 2, ..err },
        CliCase { name: "pell_no_mode", args: &["pell", "5"], exit: 2, ..err },
        CliCase {
            name: "compile_divisibility",
            args: &["compile", "tests/golden/cli/inputs/div3.sexp", "1"],
            ..CASE
        },
        CliCase {
            name: "compile_stdin",
            args: &["compile", "-", "1"],
            stdin: Some("(exists (= (* 3 v0) v1))\n"),
            ..CASE
        },
        CliCase {
            name: "compile_parse_error",
            args: &["compile", "tests/golden/cli/inputs/unclosed.sexp", "2"],
            exit: 2,
            ..err
        },
        CliCase {
            name: "compile_scope_error",
            args: &["compile", "tests/golden/cli/inputs/scope.sexp", "1"],
            exit: 2,
            ..err
        },
        CliCase {
            name: "check_witness",
            args: &["check", "tests/golden/cli/inputs/div3.json", "12", "--bound", "10"],
            ..CASE
        },
        CliCase {
            name: "check_formula_input",
            args: &["check", "tests/golden/cli/inputs/div3.sexp", "12", "--bound", "10"],
            ..CASE
        },
        CliCase {
            name: "check_no_witness",
            args: &["check", "tests/golden/cli/inputs/div3.json", "13", "--bound", "10"],
            exit: 1,
            ..CASE
        },
        CliCase {
            name: "check_no_witness_json",
            args: &["--json", "check", "tests/golden/cli/inputs/div3.json", "13", "--bound", "10"],
            exit: 1,
            ..CASE
        },
        CliCase {
            name: "check_cap_hit",
            args: &["check", "tests/golden/cli/inputs/div3.json", "12", "--bound", "10", "--cap", "3"],
            exit: 3,
            ..CASE
        },
        CliCase {
            name: "check_cap_hit_json",
            args: &[
                "--json", "check", "tests/golden/cli/inputs/div3.json", "12", "--bound", "10",
                "--cap", "3",
            ],
            exit: 3,
            ..CASE
        },
        CliCase {
            name: "check_arity",
            args: &["check", "tests/golden/cli/inputs/div3.json", "12", "13", "--bound", "10"],
            exit: 2,
            ..err
        },
        CliCase {
            name: "check_bad_number",
            args: &["check", "tests/golden/cli/inputs/div3.json", "twelve", "--bound", "10"],
            exit: 2,
            ..err
        },
        CliCase {
            name: "verify_theorem3_small",
            args: &["verify", "--theorem3", "2", "1", "--xy-max", "50"],
            ..CASE
        },
        CliCase {
            name: "verify_theorem3_small_json",
            args: &["--json", "verify", "--theorem3", "2", "1", "--xy-max", "50"],
            ..CASE
        },
        CliCase {
            name: "verify_theorem3_bad_base",
            args: &["verify", "--theorem3", "1", "1"],
            exit: 2,
            ..err
        },
        CliCase {
            name: "verify_pow_small",
            args: &["verify", "--pow", "1", "1", "--neg-max", "5"],
            ..CASE
        },
        CliCase {
            name: "verify_pow_small_json",
            args: &["--json", "verify", "--pow", "1", "1", "--neg-max", "5"],
            ..CASE
        },
        CliCase {
            name: "verify_pow_triaged",
            args: &["verify", "--pow", "2", "2", "--digit-cap", "10", "--neg-max", "5"],
            exit: 3,
            ..CASE
        },
        // clap's own usage error; its wording is not ours to pin down.
        CliCase {
            name: "verify_missing_mode",
            args: &["verify"],
            exit: 2,
            golden_stdout: false,
            ..CASE
        },
    ]
}

fn run_once(case: &CliCase) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dioph"));
    cmd.args(case.args).current_dir(manifest_dir());
    if let Some(text) = case.stdin {
        cmd.stdin(Stdio::piped());
        cmd.stdout(Stdio::piped());
        cmd.stderr(Stdio::piped());
        let mut child = cmd.spawn().expect("spawn dioph");
        use std::io::Write as _;
        child
            .stdin
            .take()
            .expect("piped stdin")
            .write_all(text.as_bytes())
            .expect("write stdin");
        child.wait_with_output().expect("run dioph")
    } else {
        cmd.stdin(Stdio::null());
        cmd.output().expect("run dioph")
    }
}

fn compare_golden(case: &CliCase, stream: &str, bytes: &[u8]) {
    let path = golden_dir().join(format!("cli/{}.{stream}", case.name));
    if regen() {
        std::fs::write(&path, bytes).expect("write golden");
        return;
    }
    let want = std::fs::read(&path)
        .unwrap_or_else(|e| panic!("golden file {} unreadable ({e}); run with DIOPH_REGEN_GOLDEN=1 to create it", path.display()));
    assert_eq!(
        bytes,
        want.as_slice(),
        "case {}: {stream} differs from {}",
        case.name,
        path.display()
    );
}

pub fn run_case(case: &CliCase) {
    let first = run_once(case);
    let second = run_once(case);
    assert_eq!(
        first.stdout, second.stdout,
        "case {}: stdout differs between two identical runs",
        case.name
    );
    assert_eq!(
        first.stderr, second.stderr,
        "case {}: stderr differs between two identical runs",
        case.name
    );
    assert_eq!(
        first.status.code(),
        Some(case.exit),
        "case {}: exit code (stderr: {})",
        case.name,
        String::from_utf8_lossy(&first.stderr)
    );
    if case.golden_stdout {
        compare_golden(case, "stdout", &first.stdout);
    }
    if case.golden_stderr {
        compare_golden(case, "stderr", &first.stderr);
    }
}

pub fn run_all_cli_cases() -> usize {
    let cases = cli_cases();
    for case in &cases {
        run_case(case);
    }
    cases.len()
}

/// The exit codes the whole case list exercises, for the coverage assert.
pub fn exercised_exit_codes() -> Vec<i32> {
    let mut codes: Vec<i32> = cli_cases().iter().map(|c| c.exit).collect();
    codes.sort_unstable();
    codes.dedup();
    codes
}
