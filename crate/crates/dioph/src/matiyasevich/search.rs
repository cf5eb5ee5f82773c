//! Bounded-truth decision procedures and escalating witness search.
//!
//! Scanning the quantifiers of the Pell-graph formula naively is hopeless:
//! witnesses grow exponentially in `k`. The searches here walk the
//! solution structure instead. Clause 2 confines `(u, v)` to the Pell
//! solution sequence, so `u, v` are enumerated by index; the two
//! congruences on `b` cut its search to a single residue class, of which
//! only the least admissible member matters because every remaining clause
//! is monotone against the bound; and clause 3 confines `(s, t)` the same
//! way for base `b`. The result decides exactly the formula's truth with
//! every quantifier capped at `bound`, and returns the witness it found.
//!
//! These procedures lean on the solution-completeness and congruence
//! lemmas that the Pell module tests exhaustively at desk scale; the unit
//! tests here close the loop by comparing against the raw bounded
//! evaluator at tiny bounds, where the naive scan is still affordable.

use super::{congruent, divides, PellWitness};
use crate::pell::PellBase;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Least natural congruent to `r1` mod `m1` and to `r2` mod `m2`, with the
/// combined modulus, or `None` when the classes are disjoint. Moduli must
/// be positive.
pub fn crt_min(
    r1: &BigUint,
    m1: &BigUint,
    r2: &BigUint,
    m2: &BigUint,
) -> Option<(BigUint, BigUint)> {
    assert!(!m1.is_zero() && !m2.is_zero(), "crt moduli must be positive");
    let (r1, r2) = (r1 % m1, r2 % m2);
    let (im1, im2) = (BigInt::from(m1.clone()), BigInt::from(m2.clone()));
    let gcd = im1.extended_gcd(&im2);
    let diff = BigInt::from(r2) - BigInt::from(r1.clone());
    let (q, rem) = diff.div_rem(&gcd.gcd);
    if !rem.is_zero() {
        return None;
    }
    let lcm = &im1 / &gcd.gcd * &im2;
    let shift = &im1 * (q * gcd.x).mod_floor(&(&im2 / &gcd.gcd));
    let r = (BigInt::from(r1) + shift).mod_floor(&lcm);
    Some((
        r.to_biguint().expect("representative of a positive modulus is nonnegative"),
        lcm.to_biguint().expect("lcm of positive moduli is positive"),
    ))
}

/// Decides whether values `u, v, s, t, b <= bound` satisfy the ten clauses
/// at `(a, k, x, y)`, returning the first witness in scan order: ascending
/// Pell index for `(u, v)`, then the least admissible `b`, then ascending
/// index for `(s, t)`.
pub fn phi_witness_bounded(
    base: &PellBase,
    k: &BigUint,
    x: &BigUint,
    y: &BigUint,
    bound: &BigUint,
) -> Option<PellWitness> {
    if y.is_zero() {
        return None;
    }
    if !base.is_pell_solution(x, y) {
        return None;
    }
    let y_sq = y * y;
    let four_y = BigUint::from(4u32) * y;
    let one = BigUint::one();
    let (mut u, mut v) = base.step(&one, &BigUint::zero());
    while &u <= bound {
        if divides(&y_sq, &v) {
            if let Some(found) = scan_b_class(base, k, x, &four_y, &u, &v, bound) {
                return Some(found);
            }
        }
        let next = base.step(&u, &v);
        u = next.0;
        v = next.1;
    }
    None
}

fn scan_b_class(
    base: &PellBase,
    k: &BigUint,
    x: &BigUint,
    four_y: &BigUint,
    u: &BigUint,
    v: &BigUint,
    bound: &BigUint,
) -> Option<PellWitness> {
    let one = BigUint::one();
    let (mut b, lcm) = crt_min(&one, four_y, base.a(), u)?;
    if b <= one {
        b += &lcm;
    }
    if &b > bound {
        return None;
    }
    let b_base = PellBase::new(b.clone()).expect("b > 1");
    let (mut s, mut t) = (one, BigUint::zero());
    while &s <= bound {
        if congruent(&s, x, u) && congruent(&t, k, four_y) {
            return Some(PellWitness { u: u.clone(), v: v.clone(), s, t, b });
        }
        let next = b_base.step(&s, &t);
        s = next.0;
        t = next.1;
    }
    None
}

/// Truth of the Pell-graph formula at `(a, k, x, y)` with every quantifier
/// capped at `bound`. Equals `eval_bounded` on the formula, decided
/// structurally.
pub fn pell_truth_bounded(
    base: &PellBase,
    k: &BigUint,
    x: &BigUint,
    y: &BigUint,
    bound: &BigUint,
) -> bool {
    if k > y {
        return false;
    }
    if x.is_one() && y.is_zero() {
        return true;
    }
    phi_witness_bounded(base, k, x, y, bound).is_some()
}

/// Result of an escalating witness search.
#[derive(Debug, Clone)]
pub enum EscalationOutcome {
    Found { witness: PellWitness, bound_used: BigUint, rounds: u32 },
    Exhausted { last_bound: BigUint, rounds: u32 },
}

/// Runs [`phi_witness_bounded`] under bounds `b0, 4*b0, 16*b0, ...` until a
/// witness appears or `max_rounds` bounds have been tried.
pub fn find_phi_witness(
    base: &PellBase,
    k: &BigUint,
    x: &BigUint,
    y: &BigUint,
    b0: &BigUint,
    max_rounds: u32,
) -> EscalationOutcome {
    let mut bound = b0.clone();
    for round in 1..=max_rounds {
        if let Some(witness) = phi_witness_bounded(base, k, x, y, &bound) {
            return EscalationOutcome::Found { witness, bound_used: bound, rounds: round };
        }
        if round < max_rounds {
            bound *= 4u32;
        }
    }
    EscalationOutcome::Exhausted { last_bound: bound, rounds: max_rounds }
}

/// Truth of the power formula at `(x, y, w)` with every quantifier capped
/// at `bound`, decided structurally: candidates for the scale `W` stop as
/// soon as the least admissible `a = x_W(W+1)` outgrows the bound, since
/// that least value increases in `W`.
pub fn pow_truth_bounded(x: &BigUint, y: &BigUint, w: &BigUint, bound: &BigUint) -> bool {
    if y.is_zero() {
        return w.is_one();
    }
    if x.is_zero() {
        return w.is_zero();
    }
    let mut w_cap = x.max(y).clone();
    while &w_cap <= bound {
        match scan_scale(&w_cap, x, y, w, bound) {
            ScaleOutcome::Witnessed => return true,
            ScaleOutcome::NoCandidate => break,
            ScaleOutcome::Rejected => w_cap += 1u32,
        }
    }
    false
}

enum ScaleOutcome {
    Witnessed,
    Rejected,
    /// Even the least admissible `a` for this scale exceeds the bound.
    NoCandidate,
}

fn scan_scale(
    w_cap: &BigUint,
    x: &BigUint,
    y: &BigUint,
    w: &BigUint,
    bound: &BigUint,
) -> ScaleOutcome {
    let base = PellBase::new(w_cap + 1u32).expect("W + 1 >= 2");
    let (mut xa, mut ya) = (BigUint::one(), BigUint::zero());
    let mut index_mod = BigUint::zero();
    let mut any_candidate = false;
    loop {
        let next = base.step(&xa, &ya);
        xa = next.0;
        ya = next.1;
        index_mod += 1u32;
        if index_mod == *w_cap {
            index_mod = BigUint::zero();
        }
        if &xa > bound {
            return if any_candidate { ScaleOutcome::Rejected } else { ScaleOutcome::NoCandidate };
        }
        if !index_mod.is_zero() {
            continue;
        }
        any_candidate = true;
        if check_scale_candidate(&xa, &ya, w_cap, x, y, w, bound) {
            return ScaleOutcome::Witnessed;
        }
    }
}

fn check_scale_candidate(
    a: &BigUint,
    ya: &BigUint,
    w_cap: &BigUint,
    x: &BigUint,
    y: &BigUint,
    w: &BigUint,
    bound: &BigUint,
) -> bool {
    if !divides(w_cap, ya) || a < x {
        return false;
    }
    let t = BigUint::from(2u32) * a * x - x * x - 1u32;
    if &t > bound || w >= &t {
        return false;
    }
    // x_y(a) >= 2^y for a >= 2, so large exponents cannot stay under the bound.
    let Ok(yi) = u64::try_from(y) else {
        return false;
    };
    if yi >= bound.bits() {
        return false;
    }
    let a_base = PellBase::new(a.clone()).expect("a >= 2");
    let pair = a_base.pell_pair(yi);
    if &pair.x > bound {
        return false;
    }
    if !congruent(&pair.x, &(&pair.y * (a - x) + w), &t) {
        return false;
    }
    pell_truth_bounded(&a_base, y, &pair.x, &pair.y, bound)
}

#[cfg(test)]
mod tests {
    use super::super::{pell_xy_formula, pow_formula};
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn vals(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_min(&b(1), &b(4), &b(2), &b(7)), Some((b(9), b(28))));
        assert_eq!(crt_min(&b(2), &b(4), &b(0), &b(6)), Some((b(6), b(12))));
        assert_eq!(crt_min(&b(1), &b(4), &b(0), &b(2)), None);
        assert_eq!(crt_min(&b(0), &b(5), &b(0), &b(5)), Some((b(0), b(5))));
        assert_eq!(crt_min(&b(3), &b(5), &b(3), &b(5)), Some((b(3), b(5))));
    }

    #[test]
    fn crt_result_lies_in_both_classes() {
        for m1 in 1u64..12 {
            for m2 in 1u64..12 {
                for r1 in 0..m1 {
                    for r2 in 0..m2 {
                        match crt_min(&b(r1), &b(m1), &b(r2), &b(m2)) {
                            Some((r, l)) => {
                                assert!(&r % &b(m1) == b(r1) && &r % &b(m2) == b(r2));
                                assert!(r < l);
                                assert_eq!(l, b(num_integer::lcm(m1, m2)));
                                let ru: u64 = r.to_string().parse().unwrap();
                                for cand in 0..ru {
                                    assert!(cand % m1 != r1 || cand % m2 != r2);
                                }
                            }
                            None => {
                                for cand in 0..m1 * m2 {
                                    assert!(
                                        cand % m1 != r1 || cand % m2 != r2,
                                        "missed solution {} for {} mod {}, {} mod {}",
                                        cand,
                                        r1,
                                        m1,
                                        r2,
                                        m2
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn first_pell_graph_witness() {
        let base = PellBase::new(2u32).unwrap();
        let w = phi_witness_bounded(&base, &b(1), &b(2), &b(1), &b(1000)).unwrap();
        assert_eq!((w.u, w.v, w.s, w.t, w.b), (b(7), b(4), b(9), b(1), b(9)));
    }

    #[test]
    fn degenerate_y_never_has_witnesses() {
        let base = PellBase::new(2u32).unwrap();
        assert_eq!(phi_witness_bounded(&base, &b(0), &b(1), &b(0), &b(100_000)), None);
        assert!(pell_truth_bounded(&base, &b(0), &b(1), &b(0), &b(1)));
        assert!(!pell_truth_bounded(&base, &b(1), &b(1), &b(0), &b(100_000)));
    }

    #[test]
    fn structured_decision_matches_raw_scan_at_tiny_bounds() {
        let f = pell_xy_formula();
        let bound = b(9);
        let cases: [(u64, u64, u64, u64); 8] = [
            (2, 0, 1, 0),
            (2, 1, 2, 1),
            (2, 1, 7, 4),
            (2, 0, 2, 1),
            (2, 1, 3, 1),
            (2, 2, 7, 4),
            (3, 1, 3, 1),
            (3, 1, 2, 1),
        ];
        for (a, k, x, y) in cases {
            let base = PellBase::new(a).unwrap();
            let raw = f.eval_bounded(&vals(&[a, k, x, y]), &bound);
            let structured = pell_truth_bounded(&base, &b(k), &b(x), &b(y), &bound);
            assert_eq!(raw, structured, "disagreement at ({}, {}, {}, {})", a, k, x, y);
        }
    }

    #[test]
    fn escalation_finds_the_second_solution_for_a_2() {
        let base = PellBase::new(2u32).unwrap();
        match find_phi_witness(&base, &b(2), &b(7), &b(4), &b(10), 25) {
            EscalationOutcome::Found { witness, rounds, .. } => {
                assert_eq!(witness.b, b(282_257));
                assert_eq!(witness.u, b(18_817));
                assert_eq!(witness.v, b(10_864));
                assert_eq!(witness.s.to_string(), "159338028097");
                assert_eq!(witness.t, b(564_514));
                assert!(rounds > 1, "needs more than the initial bound of 10");
                assert!(check_witness_round_trip(&witness));
            }
            EscalationOutcome::Exhausted { .. } => panic!("witness exists"),
        }
    }

    fn check_witness_round_trip(w: &PellWitness) -> bool {
        super::super::check_theorem3_witness(&b(2), &b(2), &b(7), &b(4), w).is_empty()
    }

    #[test]
    fn escalation_gives_up_at_the_cap() {
        let base = PellBase::new(2u32).unwrap();
        match find_phi_witness(&base, &b(2), &b(7), &b(4), &b(10), 3) {
            EscalationOutcome::Exhausted { last_bound, rounds } => {
                assert_eq!(rounds, 3);
                assert_eq!(last_bound, b(160));
            }
            EscalationOutcome::Found { .. } => panic!("bound 160 is too small"),
        }
    }

    #[test]
    fn power_decision_basic_conventions() {
        let bound = b(1_000_000);
        assert!(pow_truth_bounded(&b(2), &b(0), &b(1), &bound));
        assert!(pow_truth_bounded(&b(0), &b(0), &b(1), &bound));
        assert!(pow_truth_bounded(&b(0), &b(5), &b(0), &bound));
        assert!(!pow_truth_bounded(&b(0), &b(5), &b(1), &bound));
        assert!(!pow_truth_bounded(&b(2), &b(0), &b(2), &bound));
    }

    #[test]
    fn power_decision_finds_first_powers() {
        let bound = b(1_000_000);
        assert!(pow_truth_bounded(&b(2), &b(1), &b(2), &bound));
        assert!(pow_truth_bounded(&b(3), &b(1), &b(3), &bound));
        assert!(!pow_truth_bounded(&b(2), &b(1), &b(3), &bound));
        // 5^1 needs T = 2*120126*5 - 26 > 10^6; the witness only fits later.
        assert!(!pow_truth_bounded(&b(5), &b(1), &b(5), &bound));
        assert!(pow_truth_bounded(&b(5), &b(1), &b(5), &b(100_000_000_000u64)));
    }

    #[test]
    fn power_decision_rejects_non_powers_at_desk_bounds() {
        let bound = b(1_000_000);
        for (x, y, w) in [(2, 3, 7), (2, 3, 9), (3, 2, 8), (5, 4, 624), (5, 4, 626), (2, 2, 5)] {
            assert!(
                !pow_truth_bounded(&b(x), &b(y), &b(w), &bound),
                "{}^{} != {}",
                x,
                y,
                w
            );
        }
    }

    #[test]
    fn power_decision_matches_raw_scan_at_tiny_bounds() {
        let f = pow_formula();
        let bound = b(2);
        for (x, y, w) in [(1, 1, 1), (1, 1, 2), (2, 1, 2), (0, 1, 0), (1, 0, 1), (2, 2, 4)] {
            let raw = f.eval_bounded(&vals(&[x, y, w]), &bound);
            let structured = pow_truth_bounded(&b(x), &b(y), &b(w), &bound);
            assert_eq!(raw, structured, "disagreement at ({}, {}, {})", x, y, w);
        }
    }
}
