//! Desk-scale verification drivers.
//!
//! [`verify_pell_theorem3`] exercises the Pell-graph formula in both
//! directions. Forward: for each `k` up to `k_max`, search for an inner
//! witness at `(a, k, x_k, y_k)` under escalating bounds and re-check it
//! clause by clause. Backward: enumerate every `(x, y)` in a box that
//! solves the Pell equation, decide the formula at every `k <= y` under a
//! fixed bound, and demand that whenever it holds, `(x, y)` is exactly the
//! `k`-th solution pair. Bounded search cannot certify absences, so the
//! backward direction only asserts soundness of the hits; most true
//! instances need bounds far beyond the sweep and simply do not fire.
//!
//! [`verify_pow`] walks a grid of `(x, y)`. For each true triple it
//! constructs the full quantifier witness analytically, confirms the
//! clauses with independent arithmetic, and confirms that the compiled
//! polynomial vanishes at the extracted point. Witness components grow
//! roughly like `a^(y * y_y(a))` digits, so a digit estimate triages each
//! case first; cases over the cap are reported as inconclusive together
//! with a lower bound on the digits a witness would need, rather than
//! silently skipped or approximated. Negative triples are falsified by the
//! bounded decision procedure.

use super::search::{
    crt_min, find_phi_witness, pell_truth_bounded, pow_truth_bounded, EscalationOutcome,
};
use super::{check_pow_outer, check_theorem3_witness, pow_polynomial, PellWitness};
use crate::formula::CompiledDioph;
use crate::pell::{InvalidPellBase, PellBase};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

/// Maximum estimated decimal digits of the inner Pell component before a
/// power witness is declared out of reach.
pub const DEFAULT_POW_DIGIT_CAP: u64 = 4_000_000;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// First search bound; each failed round multiplies it by four.
    pub initial_bound: BigUint,
    pub max_rounds: u32,
    /// Box edge for the backward sweep over candidate pairs.
    pub backward_xy_max: u64,
    /// Quantifier bound for the backward bounded decisions.
    pub backward_bound: BigUint,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            initial_bound: BigUint::from(1_000_000u32),
            max_rounds: 5000,
            backward_xy_max: 5000,
            backward_bound: BigUint::from(1_000_000u32),
        }
    }
}

/// One forward instance: the pair `(x_k, y_k)` and the witness found for it.
#[derive(Debug, Clone)]
pub struct ForwardCheck {
    pub k: u64,
    pub x: BigUint,
    pub y: BigUint,
    /// `None` for `k = 0`, where the trivial disjunct carries the formula.
    pub witness: Option<PellWitness>,
    pub bound_used: Option<BigUint>,
    pub rounds: u32,
    pub clause_failures: Vec<&'static str>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct BackwardCheck {
    pub xy_max: u64,
    pub bound: BigUint,
    /// Pairs in the box solving `x^2 = (a^2 - 1) y^2 + 1`.
    pub pell_pairs: u64,
    /// `(pair, k)` combinations decided.
    pub instances: u64,
    /// Instances that held and matched the `k`-th solution pair.
    pub confirmed: u64,
    /// `(x, y, k)` triples where the formula held but the pair was wrong.
    pub violations: Vec<(u64, u64, u64)>,
}

#[derive(Debug, Clone)]
pub struct Theorem3Report {
    pub a: BigUint,
    pub k_max: u64,
    pub forward: Vec<ForwardCheck>,
    pub backward: BackwardCheck,
    pub ok: bool,
}

pub fn verify_pell_theorem3(
    a: &BigUint,
    k_max: u64,
    opts: &VerifyOptions,
) -> Result<Theorem3Report, InvalidPellBase> {
    let base = PellBase::new(a.clone())?;
    let forward: Vec<ForwardCheck> = (0..=k_max).map(|k| forward_check(&base, k, opts)).collect();
    let backward = backward_sweep(&base, opts);
    let ok = forward.iter().all(|c| c.ok) && backward.violations.is_empty();
    Ok(Theorem3Report { a: a.clone(), k_max, forward, backward, ok })
}

fn forward_check(base: &PellBase, k: u64, opts: &VerifyOptions) -> ForwardCheck {
    let pair = base.pell_pair(k);
    if k == 0 {
        let env = [base.a().clone(), BigUint::zero(), pair.x.clone(), pair.y.clone()];
        let ok = super::pell_xy_formula().eval_bounded(&env, &BigUint::zero());
        return ForwardCheck {
            k,
            x: pair.x,
            y: pair.y,
            witness: None,
            bound_used: None,
            rounds: 0,
            clause_failures: Vec::new(),
            ok,
        };
    }
    let kb = BigUint::from(k);
    match find_phi_witness(base, &kb, &pair.x, &pair.y, &opts.initial_bound, opts.max_rounds) {
        EscalationOutcome::Found { witness, bound_used, rounds } => {
            let clause_failures = check_theorem3_witness(base.a(), &kb, &pair.x, &pair.y, &witness);
            let ok = clause_failures.is_empty();
            ForwardCheck {
                k,
                x: pair.x,
                y: pair.y,
                witness: Some(witness),
                bound_used: Some(bound_used),
                rounds,
                clause_failures,
                ok,
            }
        }
        EscalationOutcome::Exhausted { rounds, .. } => ForwardCheck {
            k,
            x: pair.x,
            y: pair.y,
            witness: None,
            bound_used: None,
            rounds,
            clause_failures: Vec::new(),
            ok: false,
        },
    }
}

/// All `(x, y)` with `1 <= x <= xy_max`, `0 <= y <= xy_max` and
/// `x^2 = d y^2 + 1`, by brute force that never consults the solution
/// recurrence.
fn small_pell_pairs(d: &BigUint, xy_max: u64) -> Vec<(u64, u64)> {
    if let Ok(d) = u128::try_from(d) {
        let edge = u128::from(xy_max);
        if d.checked_mul(edge * edge).and_then(|m| m.checked_add(1)).is_some() {
            let mut out = Vec::new();
            for x in 1..=edge {
                for y in 0..=edge {
                    if x * x == d * y * y + 1 {
                        out.push((x as u64, y as u64));
                    }
                }
            }
            return out;
        }
    }
    let mut out = Vec::new();
    for y in 0..=xy_max {
        let rhs = d * (y * y) + 1u32;
        let x = rhs.sqrt();
        if &x * &x == rhs && x <= BigUint::from(xy_max) {
            out.push((u64::try_from(&x).unwrap(), y));
        }
    }
    out
}

fn backward_sweep(base: &PellBase, opts: &VerifyOptions) -> BackwardCheck {
    let pairs = small_pell_pairs(base.d(), opts.backward_xy_max);
    let mut instances = 0;
    let mut confirmed = 0;
    let mut violations = Vec::new();
    for &(x, y) in &pairs {
        let (xb, yb) = (BigUint::from(x), BigUint::from(y));
        for k in 0..=y {
            instances += 1;
            if pell_truth_bounded(base, &BigUint::from(k), &xb, &yb, &opts.backward_bound) {
                let target = base.pell_pair(k);
                if target.x == xb && target.y == yb {
                    confirmed += 1;
                } else {
                    violations.push((x, y, k));
                }
            }
        }
    }
    BackwardCheck {
        xy_max: opts.backward_xy_max,
        bound: opts.backward_bound.clone(),
        pell_pairs: pairs.len() as u64,
        instances,
        confirmed,
        violations,
    }
}

#[derive(Debug, Clone)]
pub enum PowStatus {
    Verified {
        /// Whether the triple lives in the quantifier-free disjuncts.
        trivial: bool,
    },
    /// The witness exists but its components are astronomically large; the
    /// inner Pell component sits at `pell_index` and needs at least
    /// `digit_floor` decimal digits.
    Inconclusive { pell_index: BigUint, digit_floor: BigUint },
    Failed { reason: String },
}

#[derive(Debug, Clone)]
pub struct PowCheck {
    pub x: u64,
    pub y: u64,
    pub w: BigUint,
    pub status: PowStatus,
}

#[derive(Debug, Clone)]
pub struct PowReport {
    pub x_max: u64,
    pub y_max: u64,
    pub digit_cap: u64,
    pub positives: Vec<PowCheck>,
    pub negatives_tested: u64,
    /// `(x, y, w)` with `w != x^y` where the bounded search claimed a witness.
    pub negative_failures: Vec<(u64, u64, u64)>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct PowOptions {
    pub digit_cap: u64,
    pub negative_w_max: u64,
    pub negative_bound: BigUint,
    pub threads: usize,
}

impl Default for PowOptions {
    fn default() -> Self {
        PowOptions {
            digit_cap: DEFAULT_POW_DIGIT_CAP,
            negative_w_max: 100,
            negative_bound: BigUint::from(1_000_000u32),
            threads: 4,
        }
    }
}

/// The values shared by every grid case with the same `(max(x, y), y)`: the
/// pair `(X, Y) = (x_y(a), y_y(a))` and the witness of the embedded
/// Pell-graph instance `(a, y, X, Y)`, checked once.
struct InnerBlock {
    x_pow: BigUint,
    y_pow: BigUint,
    witness: PellWitness,
    failures: Vec<&'static str>,
}

type InnerMemo = Mutex<HashMap<(u64, u64), Arc<OnceLock<InnerBlock>>>>;

pub fn verify_pow(x_max: u64, y_max: u64, opts: &PowOptions) -> PowReport {
    let compiled = pow_polynomial();
    let tasks: Vec<(u64, u64)> =
        (0..=x_max).flat_map(|x| (0..=y_max).map(move |y| (x, y))).collect();
    let slots: Vec<Mutex<Option<PowCheck>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let memo: InnerMemo = Mutex::new(HashMap::new());
    let cursor = AtomicUsize::new(0);
    let workers = opts.threads.clamp(1, tasks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&(x, y)) = tasks.get(i) else { break };
                let check = positive_check(&compiled, &memo, x, y, opts.digit_cap);
                *slots[i].lock().unwrap() = Some(check);
            });
        }
    });
    let positives: Vec<PowCheck> =
        slots.into_iter().map(|s| s.into_inner().unwrap().unwrap()).collect();
    let (negatives_tested, negative_failures) = negative_sweep(x_max, y_max, opts);
    let ok = positives.iter().all(|c| !matches!(c.status, PowStatus::Failed { .. }))
        && negative_failures.is_empty();
    PowReport {
        x_max,
        y_max,
        digit_cap: opts.digit_cap,
        positives,
        negatives_tested,
        negative_failures,
        ok,
    }
}

fn positive_check(
    compiled: &CompiledDioph,
    memo: &InnerMemo,
    x: u64,
    y: u64,
    digit_cap: u64,
) -> PowCheck {
    let exponent = u32::try_from(y).expect("grid exponents are small");
    let w = BigUint::from(x).pow(exponent);
    let env = [BigUint::from(x), BigUint::from(y), w.clone()];
    if x == 0 || y == 0 {
        let hints = vec![BigUint::zero(); 12];
        let status = match confirm_membership(compiled, &env, &hints) {
            Ok(()) => PowStatus::Verified { trivial: true },
            Err(reason) => PowStatus::Failed { reason },
        };
        return PowCheck { x, y, w, status };
    }

    let w_cap = x.max(y);
    let scale_base = PellBase::new(w_cap + 1).expect("W + 1 >= 2");
    let scale = scale_base.pell_pair(w_cap);
    let a = scale.x.clone();
    let y_pow = PellBase::new(a.clone()).expect("a >= 2").pell_pair(y).y;
    let m = inner_index(&a, y, &y_pow);

    // m * log10(2a) bounds the digits of x_m(a) from above, m * (digits(a) - 1)
    // from below, since a^m <= x_m(a) < (2a)^m.
    let est = &m * (&a * 2u32).bits() * 30103u32 / 100000u32;
    let m_small = u64::try_from(&m).ok();
    if est > BigUint::from(digit_cap) || m_small.is_none() {
        let digit_floor = &m * (a.to_string().len() as u64 - 1);
        return PowCheck {
            x,
            y,
            w,
            status: PowStatus::Inconclusive { pell_index: m, digit_floor },
        };
    }

    let cell = {
        let mut map = memo.lock().unwrap();
        map.entry((w_cap, y)).or_default().clone()
    };
    let inner = cell.get_or_init(|| build_inner(&a, y, m_small.unwrap()));

    let z = &scale.y / BigUint::from(w_cap);
    let e = &a - BigUint::from(x);
    let t = BigUint::from(2u32) * &a * x - BigUint::from(x) * x - 1u32;
    let outer = [
        BigUint::from(w_cap),
        a,
        t,
        z,
        inner.x_pow.clone(),
        inner.y_pow.clone(),
        e,
    ];
    let mut failures = check_pow_outer(&env[0], &env[1], &w, &outer);
    failures.extend(&inner.failures);
    if !failures.is_empty() {
        return PowCheck {
            x,
            y,
            w,
            status: PowStatus::Failed { reason: format!("clauses failed: {}", failures.join("; ")) },
        };
    }

    let mut hints = outer.to_vec();
    let wit = &inner.witness;
    hints.extend([wit.u.clone(), wit.v.clone(), wit.s.clone(), wit.t.clone(), wit.b.clone()]);
    let status = match confirm_membership(compiled, &env, &hints) {
        Ok(()) => PowStatus::Verified { trivial: false },
        Err(reason) => PowStatus::Failed { reason },
    };
    PowCheck { x, y, w, status }
}

/// Index of the inner Pell component: the least multiple of `y * y_y(a)`
/// for which `x_m(a)` is odd, so both congruence classes for `b` intersect.
fn inner_index(a: &BigUint, y: u64, y_pow: &BigUint) -> BigUint {
    let m = y_pow * y;
    if !a.bit(0) && m.bit(0) {
        m * 2u32
    } else {
        m
    }
}

fn build_inner(a: &BigUint, y: u64, m: u64) -> InnerBlock {
    let base = PellBase::new(a.clone()).expect("a >= 2");
    let solution_m = base.pell_pair(m);
    let target = base.pell_pair(y);
    let four_y = &target.y * 4u32;
    let (mut b, lcm) = crt_min(&BigUint::one(), &four_y, a, &solution_m.x)
        .expect("x_m(a) is odd and coprime to y_y(a)");
    if b <= BigUint::one() {
        b += &lcm;
    }
    let b_base = PellBase::new(b.clone()).expect("b > 1");
    let shadow = b_base.pell_pair(y);
    let witness =
        PellWitness { u: solution_m.x, v: solution_m.y, s: shadow.x, t: shadow.y, b };
    let failures = check_theorem3_witness(a, &BigUint::from(y), &target.x, &target.y, &witness);
    InnerBlock { x_pow: target.x, y_pow: target.y, witness, failures }
}

/// Extracts dummy values for `env` from the quantifier hints and confirms
/// the compiled polynomial vanishes there.
fn confirm_membership(
    compiled: &CompiledDioph,
    env: &[BigUint],
    hints: &[BigUint],
) -> Result<(), String> {
    let Some(dummies) = compiled.extract_with_hints(env, hints) else {
        return Err("hints do not witness the formula".to_string());
    };
    let mut point = env.to_vec();
    point.extend(dummies);
    let value = compiled.eval(&point);
    if value.is_zero() {
        Ok(())
    } else {
        Err(format!("polynomial evaluated to a nonzero value of {} digits",
            value.to_string().trim_start_matches('-').len()))
    }
}

fn negative_sweep(x_max: u64, y_max: u64, opts: &PowOptions) -> (u64, Vec<(u64, u64, u64)>) {
    let mut tested = 0;
    let mut failures = Vec::new();
    for x in 0..=x_max {
        for y in 0..=y_max {
            let truth = BigUint::from(x).pow(u32::try_from(y).expect("grid exponents are small"));
            let (xb, yb) = (BigUint::from(x), BigUint::from(y));
            for w in 0..=opts.negative_w_max {
                if BigUint::from(w) == truth {
                    continue;
                }
                tested += 1;
                if pow_truth_bounded(&xb, &yb, &BigUint::from(w), &opts.negative_bound) {
                    failures.push((x, y, w));
                }
            }
        }
    }
    (tested, failures)
}
