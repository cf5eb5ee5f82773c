//! Command line driver for the `dioph` crate.
//!
//! Four subcommands: `pell` (solution sequence values, enumeration, index
//! lookup), `compile` (formula file to canonical polynomial JSON), `check`
//! (bounded witness search for given parameter values) and `verify` (the
//! built-in desk-scale verification sweeps).
//!
//! Exit codes: 0 for success or a check that came back true, 1 for a check
//! that came back false or a sweep with failures, 2 for usage and input
//! errors, 3 when an evaluation cap stopped a search before a verdict.
//!
//! Every number on the command line and in the output is a decimal string.
//! Output carries no timestamps and JSON keys are sorted, so two runs of
//! the same command are byte-for-byte identical.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use dioph::formula::sexp::parse_formula;
use dioph::formula::{compile, CompiledDioph, MembershipOutcome};
use dioph::matiyasevich::{
    verify_pell_theorem3, verify_pow, ForwardCheck, PowOptions, PowReport, PowStatus,
    Theorem3Report, VerifyOptions,
};
use dioph::pell::PellBase;

#[derive(Parser)]
#[command(name = "dioph", version, about = "Pell sequences, Diophantine formulas, and their verification", max_term_width = 100)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solutions of x^2 = (a^2 - 1) y^2 + 1.
    Pell(PellArgs),
    /// Compile a formula file to a single polynomial, JSON on stdout.
    Compile {
        /// Formula in s-expression syntax; "-" reads stdin.
        file: String,
        /// Number of free parameters the formula is scoped over.
        params: usize,
    },
    /// Search for a witness of a compiled polynomial or formula at given
    /// parameter values.
    Check(CheckArgs),
    /// Run a built-in verification sweep.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PellArgs {
    /// Pell base a, at least 2.
    a: String,
    /// Index n: print x_n(a) and y_n(a).
    n: Option<u64>,
    /// List every solution pair with x <= X_BOUND, ascending.
    #[arg(long, value_name = "X_BOUND", conflicts_with = "n")]
    enumerate: Option<String>,
    /// Find the index n with (x, y) = (x_n(a), y_n(a)).
    #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with_all = ["n", "enumerate"])]
    index: Option<Vec<String>>,
}

#[derive(Args)]
struct CheckArgs {
    /// Compiled polynomial JSON or formula s-expression; "-" reads stdin.
    file: String,
    /// One decimal value per parameter.
    params: Vec<String>,
    /// Search box: every dummy variable ranges over 0..=BOUND.
    #[arg(long, value_name = "BOUND")]
    bound: String,
    /// Give up (exit 3) after this many polynomial evaluations.
    #[arg(long, value_name = "N", default_value_t = 10_000_000)]
    cap: u64,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("sweep").required(true).multiple(false))]
struct VerifyArgs {
    /// Check the Pell formula against the recurrence for base A, indices
    /// 0..=K_MAX, forward and backward.
    #[arg(long, num_args = 2, value_names = ["A", "K_MAX"], group = "sweep")]
    theorem3: Option<Vec<String>>,
    /// Check the power formula on the grid x <= X_MAX, y <= Y_MAX, plus
    /// negative cases.
    #[arg(long, num_args = 2, value_names = ["X_MAX", "Y_MAX"], group = "sweep")]
    pow: Option<Vec<u64>>,
    /// Initial forward search bound (theorem3) or negative-case bound (pow).
    #[arg(long, value_name = "B")]
    bound: Option<String>,
    /// Escalation rounds before a forward search gives up.
    #[arg(long, value_name = "N")]
    rounds: Option<u32>,
    /// Edge of the backward brute-force box.
    #[arg(long, value_name = "M")]
    xy_max: Option<u64>,
    /// Triage cap: skip positive cases whose witness would exceed this
    /// many decimal digits.
    #[arg(long, value_name = "D")]
    digit_cap: Option<u64>,
    /// Largest non-power w tried per (x, y) in the negative sweep.
    #[arg(long, value_name = "W")]
    neg_max: Option<u64>,
    /// Worker threads for the positive sweep.
    #[arg(long, value_name = "T")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `dioph verify ... | head`) instead
    // of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Pell(args) => cmd_pell(args, cli.json),
        Cmd::Compile { file, params } => cmd_compile(file, *params),
        Cmd::Check(args) => cmd_check(args, cli.json),
        Cmd::Verify(args) => cmd_verify(args, cli.json),
    };
    ExitCode::from(code)
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    2
}

fn parse_nat(s: &str, what: &str) -> Result<BigUint, String> {
    s.parse::<BigUint>().map_err(|_| format!("{what} must be a decimal natural, got {s:?}"))
}

/// File contents, or stdin when the path is `-`.
fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
}

fn cmd_pell(args: &PellArgs, json: bool) -> u8 {
    let a = match parse_nat(&args.a, "base") {
        Ok(a) => a,
        Err(m) => return usage_error(&m),
    };
    let base = match PellBase::new(a) {
        Ok(b) => b,
        Err(e) => return usage_error(&e.to_string()),
    };
    let modes =
        args.n.is_some() as u8 + args.enumerate.is_some() as u8 + args.index.is_some() as u8;
    if modes != 1 {
        return usage_error("pell takes exactly one of: an index N, --enumerate, --index");
    }

    if let Some(n) = args.n {
        let p = base.pell_pair(n);
        if json {
            println!(
                "{}",
                json!({
                    "a": base.a().to_string(),
                    "n": n.to_string(),
                    "x": p.x.to_string(),
                    "y": p.y.to_string(),
                })
            );
        } else {
            println!("x={} y={}", p.x, p.y);
        }
        return 0;
    }

    if let Some(xb) = &args.enumerate {
        let xb = match parse_nat(xb, "x bound") {
            Ok(b) => b,
            Err(m) => return usage_error(&m),
        };
        let pairs = base.enumerate_solutions(&xb);
        if json {
            let arr: Vec<_> = pairs
                .iter()
                .map(|(x, y)| json!({"x": x.to_string(), "y": y.to_string()}))
                .collect();
            println!(
                "{}",
                json!({"a": base.a().to_string(), "pairs": arr, "x_bound": xb.to_string()})
            );
        } else {
            for (x, y) in &pairs {
                println!("x={x} y={y}");
            }
        }
        return 0;
    }

    let xy = args.index.as_ref().expect("one mode is set");
    let (x, y) = match (parse_nat(&xy[0], "x"), parse_nat(&xy[1], "y")) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(m), _) | (_, Err(m)) => return usage_error(&m),
    };
    match base.solution_index(&x, &y) {
        Some(n) => {
            if json {
                println!(
                    "{}",
                    json!({
                        "a": base.a().to_string(),
                        "n": n.to_string(),
                        "x": x.to_string(),
                        "y": y.to_string(),
                    })
                );
            } else {
                println!("n={n}");
            }
            0
        }
        None => {
            if json {
                println!(
                    "{}",
                    json!({
                        "a": base.a().to_string(),
                        "n": null,
                        "x": x.to_string(),
                        "y": y.to_string(),
                    })
                );
            } else {
                println!("not a solution");
            }
            1
        }
    }
}

fn cmd_compile(file: &str, params: usize) -> u8 {
    let src = match read_source(file) {
        Ok(s) => s,
        Err(m) => return usage_error(&m),
    };
    let f = match parse_formula(&src, params) {
        Ok(f) => f,
        Err(e) => return usage_error(&format!("parse error at byte {}: {}", e.pos, e.msg)),
    };
    match compile(&f, params) {
        Ok(c) => {
            println!("{}", c.to_json());
            0
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

/// Compiled polynomial from either accepted input form. JSON input is
/// recognised by its leading brace.
fn load_compiled(src: &str, params: usize) -> Result<CompiledDioph, String> {
    if src.trim_start().starts_with('{') {
        return CompiledDioph::from_json(src).map_err(|e| e.to_string());
    }
    let f = parse_formula(src, params)
        .map_err(|e| format!("parse error at byte {}: {}", e.pos, e.msg))?;
    compile(&f, params).map_err(|e| e.to_string())
}

fn cmd_check(args: &CheckArgs, json: bool) -> u8 {
    let bound = match parse_nat(&args.bound, "bound") {
        Ok(b) => b,
        Err(m) => return usage_error(&m),
    };
    let mut params = Vec::with_capacity(args.params.len());
    for p in &args.params {
        match parse_nat(p, "parameter") {
            Ok(v) => params.push(v),
            Err(m) => return usage_error(&m),
        }
    }
    let src = match read_source(&args.file) {
        Ok(s) => s,
        Err(m) => return usage_error(&m),
    };
    let compiled = match load_compiled(&src, params.len()) {
        Ok(c) => c,
        Err(m) => return usage_error(&m),
    };
    if compiled.params() != params.len() {
        return usage_error(&format!(
            "polynomial takes {} parameters, {} given",
            compiled.params(),
            params.len()
        ));
    }

    match compiled.membership_capped(&params, &bound, args.cap) {
        MembershipOutcome::Found(w) => {
            if json {
                let arr: Vec<_> = w.iter().map(|v| v.to_string()).collect();
                println!("{}", json!({"outcome": "found", "witness": arr}));
            } else {
                let mut line = String::from("witness:");
                for v in &w {
                    line.push(' ');
                    line.push_str(&v.to_string());
                }
                println!("{line}");
            }
            0
        }
        MembershipOutcome::Exhausted => {
            if json {
                println!("{}", json!({"bound": bound.to_string(), "outcome": "exhausted"}));
            } else {
                println!("no witness <= {bound}");
            }
            1
        }
        MembershipOutcome::CapHit { evaluated } => {
            if json {
                println!(
                    "{}",
                    json!({"evaluated": evaluated.to_string(), "outcome": "cap_hit"})
                );
            } else {
                println!("search cap hit after {evaluated} evaluations");
            }
            3
        }
    }
}

fn cmd_verify(args: &VerifyArgs, json: bool) -> u8 {
    if let Some(t) = &args.theorem3 {
        let a = match parse_nat(&t[0], "base") {
            Ok(a) => a,
            Err(m) => return usage_error(&m),
        };
        let k_max = match t[1].parse::<u64>() {
            Ok(k) => k,
            Err(_) => return usage_error(&format!("k_max must be a decimal natural, got {:?}", t[1])),
        };
        let mut opts = VerifyOptions::default();
        if let Some(b) = &args.bound {
            match parse_nat(b, "bound") {
                Ok(b) => {
                    opts.initial_bound = b.clone();
                    opts.backward_bound = b;
                }
                Err(m) => return usage_error(&m),
            }
        }
        if let Some(r) = args.rounds {
            opts.max_rounds = r;
        }
        if let Some(m) = args.xy_max {
            opts.backward_xy_max = m;
        }
        let report = match verify_pell_theorem3(&a, k_max, &opts) {
            Ok(r) => r,
            Err(e) => return usage_error(&e.to_string()),
        };
        print_theorem3(&report, json);
        return if report.ok { 0 } else { 1 };
    }

    let grid = args.pow.as_ref().expect("clap group picks one sweep");
    let mut opts = PowOptions::default();
    if let Some(b) = &args.bound {
        match parse_nat(b, "bound") {
            Ok(b) => opts.negative_bound = b,
            Err(m) => return usage_error(&m),
        }
    }
    if let Some(d) = args.digit_cap {
        opts.digit_cap = d;
    }
    if let Some(n) = args.neg_max {
        opts.negative_w_max = n;
    }
    if let Some(t) = args.threads {
        opts.threads = t.max(1);
    }
    let report = verify_pow(grid[0], grid[1], &opts);
    print_pow(&report, json);
    let inconclusive = report
        .positives
        .iter()
        .filter(|c| matches!(c.status, PowStatus::Inconclusive { .. }))
        .count();
    if !report.ok {
        1
    } else if inconclusive > 0 {
        3
    } else {
        0
    }
}

fn forward_json(c: &ForwardCheck) -> serde_json::Value {
    json!({
        "k": c.k.to_string(),
        "x": c.x.to_string(),
        "y": c.y.to_string(),
        "ok": c.ok,
        "rounds": c.rounds.to_string(),
        "bound_used": c.bound_used.as_ref().map(|b| b.to_string()),
        "witness": c.witness.as_ref().map(|w| json!({
            "u": w.u.to_string(),
            "v": w.v.to_string(),
            "s": w.s.to_string(),
            "t": w.t.to_string(),
            "b": w.b.to_string(),
        })),
        "failures": c.clause_failures,
    })
}

fn print_theorem3(r: &Theorem3Report, json: bool) {
    if json {
        let fwd: Vec<_> = r.forward.iter().map(forward_json).collect();
        let viol: Vec<_> = r
            .backward
            .violations
            .iter()
            .map(|(x, y, k)| json!([x.to_string(), y.to_string(), k.to_string()]))
            .collect();
        println!(
            "{}",
            json!({
                "a": r.a.to_string(),
                "k_max": r.k_max.to_string(),
                "forward": fwd,
                "backward": {
                    "xy_max": r.backward.xy_max.to_string(),
                    "bound": r.backward.bound.to_string(),
                    "pairs": r.backward.pell_pairs.to_string(),
                    "instances": r.backward.instances.to_string(),
                    "confirmed": r.backward.confirmed.to_string(),
                    "violations": viol,
                },
                "ok": r.ok,
            })
        );
        return;
    }
    println!("theorem3 a={} k_max={}", r.a, r.k_max);
    for c in &r.forward {
        let mut line = format!("forward k={} x={} y={} ok={}", c.k, c.x, c.y, c.ok);
        if c.rounds > 0 {
            line.push_str(&format!(" rounds={}", c.rounds));
        }
        if let Some(b) = &c.bound_used {
            line.push_str(&format!(" bound={b}"));
        }
        if let Some(w) = &c.witness {
            line.push_str(&format!(" u={} v={} s={} t={} b={}", w.u, w.v, w.s, w.t, w.b));
        }
        if !c.clause_failures.is_empty() {
            line.push_str(&format!(" failures={}", c.clause_failures.join(",")));
        }
        println!("{line}");
    }
    let b = &r.backward;
    println!(
        "backward xy_max={} bound={} pairs={} instances={} confirmed={} violations={}",
        b.xy_max,
        b.bound,
        b.pell_pairs,
        b.instances,
        b.confirmed,
        b.violations.len()
    );
    println!("ok={}", r.ok);
}

fn print_pow(r: &PowReport, json: bool) {
    let inconclusive = r
        .positives
        .iter()
        .filter(|c| matches!(c.status, PowStatus::Inconclusive { .. }))
        .count();
    if json {
        let pos: Vec<_> = r
            .positives
            .iter()
            .map(|c| {
                let status = match &c.status {
                    PowStatus::Verified { trivial } => {
                        json!({"kind": "verified", "trivial": trivial})
                    }
                    PowStatus::Inconclusive { pell_index, digit_floor } => json!({
                        "kind": "inconclusive",
                        "pell_index": pell_index.to_string(),
                        "digit_floor": digit_floor.to_string(),
                    }),
                    PowStatus::Failed { reason } => json!({"kind": "failed", "reason": reason}),
                };
                json!({
                    "x": c.x.to_string(),
                    "y": c.y.to_string(),
                    "w": c.w.to_string(),
                    "status": status,
                })
            })
            .collect();
        let neg: Vec<_> = r
            .negative_failures
            .iter()
            .map(|(x, y, w)| json!([x.to_string(), y.to_string(), w.to_string()]))
            .collect();
        println!(
            "{}",
            json!({
                "x_max": r.x_max.to_string(),
                "y_max": r.y_max.to_string(),
                "digit_cap": r.digit_cap.to_string(),
                "positives": pos,
                "negatives_tested": r.negatives_tested.to_string(),
                "negative_failures": neg,
                "inconclusive": inconclusive.to_string(),
                "ok": r.ok,
            })
        );
        return;
    }
    println!("pow x_max={} y_max={} digit_cap={}", r.x_max, r.y_max, r.digit_cap);
    for c in &r.positives {
        let tail = match &c.status {
            PowStatus::Verified { trivial } => format!("verified trivial={trivial}"),
            PowStatus::Inconclusive { pell_index, digit_floor } => {
                format!("inconclusive pell_index={pell_index} digit_floor={digit_floor}")
            }
            PowStatus::Failed { reason } => format!("FAILED {reason}"),
        };
        println!("positive x={} y={} w={} {}", c.x, c.y, c.w, tail);
    }
    println!(
        "negatives tested={} failures={}",
        r.negatives_tested,
        r.negative_failures.len()
    );
    for (x, y, w) in &r.negative_failures {
        println!("negative FAILED x={x} y={y} w={w}");
    }
    println!("inconclusive={inconclusive}");
    println!("ok={}", r.ok);
}
