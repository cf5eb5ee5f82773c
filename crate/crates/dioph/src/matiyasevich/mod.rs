//! Diophantine representations of the Pell solution graph and the power
//! function, with desk-scale verification against independent oracles.
//!
//! [`pell_xy_formula`] defines the graph of `n -> (x_n(a), y_n(a))`: a
//! four-parameter formula, true at `(a, k, x, y)` with `a > 1` exactly when
//! `x = x_k(a)` and `y = y_k(a)`. This is the heart of Matiyasevič's
//! theorem: the formula uses only equations, orderings, divisibility and
//! congruences, all of which compile to a single polynomial. The `a > 1`
//! side condition is the caller's obligation and is not part of the
//! formula.
//!
//! [`pow_formula`] builds on it following Davis's construction: a
//! three-parameter formula true at `(x, y, w)` exactly when `w = x^y`,
//! under the conventions `x^0 = 1` (including `0^0 = 1`) and `0^y = 0` for
//! `y > 0`. Compiling it ([`pow_polynomial`]) yields one integer polynomial
//! in `3 + m` variables whose zero set over the naturals is the graph of
//! exponentiation.
//!
//! Nothing here is taken on faith. The [`search`] submodule decides
//! bounded truth of both formulas by structured enumeration, the
//! [`verify`] submodule sweeps desk-scale grids, and every witness found
//! is re-checked clause by clause with plain integer arithmetic that
//! shares no code with the formula evaluator or the compiler.

pub mod search;
pub mod verify;

pub use search::{
    crt_min, find_phi_witness, pell_truth_bounded, phi_witness_bounded, pow_truth_bounded,
    EscalationOutcome,
};
pub use verify::{
    verify_pell_theorem3, verify_pow, BackwardCheck, ForwardCheck, PowCheck, PowOptions,
    PowReport, PowStatus, Theorem3Report, VerifyOptions,
};

use crate::formula::{
    add, and, and_all, compile, dvd, eq, exists, le, lt, mod_cong, mul, nat, or, var,
    CompiledDioph, Formula, Term,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The five inner unknowns of [`pell_xy_formula`], in the order they are
/// quantified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellWitness {
    pub u: BigUint,
    pub v: BigUint,
    pub s: BigUint,
    pub t: BigUint,
    pub b: BigUint,
}

impl PellWitness {
    /// The largest component, governs the search bound a witness needs.
    pub fn max_component(&self) -> &BigUint {
        [&self.u, &self.v, &self.s, &self.t, &self.b].into_iter().max().unwrap()
    }
}

/// The graph of `k -> (x_k(a), y_k(a))` as a formula over the parameters
/// `(a, k, x, y)`:
///
/// ```text
/// k <= y  and  ((x = 1 and y = 0)  or  phi)
/// ```
///
/// where `phi` quantifies `u, v, s, t, b` over these ten clauses:
///
/// ```text
///  1. x^2 + y^2 = 1 + a^2 y^2        (x, y) solves the Pell equation
///  2. u^2 + v^2 = 1 + a^2 v^2        (u, v) solves it too
///  3. s^2 + t^2 = 1 + b^2 t^2        (s, t) solves it for base b
///  4. 1 < b
///  5. b = 1 (mod 4y)
///  6. b = a (mod u)
///  7. 0 < v
///  8. y^2 | v
///  9. s = x (mod u)
/// 10. t = k (mod 4y)
/// ```
///
/// Congruence modulo 0 means equality, so clause 5 kills `phi` whenever
/// `y = 0`; that case is carried entirely by the `(x, y) = (1, 0)` disjunct,
/// which `k <= y` restricts to `k = 0`.
pub fn pell_xy_formula() -> Formula {
    let sq = |t: &Term| mul(t.clone(), t.clone());
    // Under the five binders u, v, s, t, b (outermost first) the bound
    // variables read b=0, t=1, s=2, v=3, u=4 and the parameters shift to
    // a=5, k=6, x=7, y=8.
    let (b, t, s, v, u) = (var(0), var(1), var(2), var(3), var(4));
    let (a, k, x, y) = (var(5), var(6), var(7), var(8));
    let pell = |x: &Term, y: &Term, c: &Term| {
        eq(add(sq(x), sq(y)), add(nat(1u32), mul(sq(c), sq(y))))
    };
    let four_y = mul(nat(4u32), y.clone());
    let phi = and_all([
        pell(&x, &y, &a),
        pell(&u, &v, &a),
        pell(&s, &t, &b),
        lt(nat(1u32), b.clone()),
        mod_cong(b.clone(), nat(1u32), four_y.clone()),
        mod_cong(b, a, u.clone()),
        lt(nat(0u32), v.clone()),
        dvd(mul(y.clone(), y), v),
        mod_cong(s, x, u),
        mod_cong(t, k, four_y),
    ]);
    let phi = exists(exists(exists(exists(exists(phi)))));
    and(
        le(var(1), var(3)),
        or(and(eq(var(2), nat(1u32)), eq(var(3), nat(0u32))), phi),
    )
}

/// The graph of exponentiation as a formula over `(x, y, w)`, true exactly
/// when `w = x^y`. Three disjuncts:
///
/// ```text
/// (y = 0 and w = 1)                           x^0 = 1, including 0^0
/// (0 < y and x = 0 and w = 0)                 0^y = 0 for positive y
/// (0 < y and 0 < x and exists W a T Z X Y E, body)
/// ```
///
/// The body pins `a = x_W(W+1)` via the Pell clause
/// `a^2 + (WZ)^2 = 1 + (W+1)^2 (WZ)^2` (the factor `W` inside the square
/// forces `W` to divide the second coordinate, hence `W` divides the
/// index), takes `X = x_y(a)` and `Y = y_y(a)` through
/// [`pell_xy_formula`], and reads off the power from
/// `X = Y(a - x) + w (mod 2ax - x^2 - 1)`, valid because `w = x^y < T` is
/// forced by `x, y <= W`.
pub fn pow_formula() -> Formula {
    let sq = |t: &Term| mul(t.clone(), t.clone());
    // Under the seven binders W, a, T, Z, X, Y, E (outermost first) the
    // bound variables read E=0, Y=1, X=2, Z=3, T=4, a=5, W=6 and the
    // parameters shift to x=7, y=8, w=9.
    let (e, yy, xx, z, t, a, w_cap) = (var(0), var(1), var(2), var(3), var(4), var(5), var(6));
    let (x, y, w) = (var(7), var(8), var(9));
    let wz = mul(w_cap.clone(), z);
    let body = and_all([
        lt(nat(1u32), a.clone()),
        le(x.clone(), w_cap.clone()),
        le(y.clone(), w_cap.clone()),
        eq(
            add(sq(&a), sq(&wz)),
            add(nat(1u32), mul(sq(&add(w_cap, nat(1u32))), sq(&wz))),
        ),
        eq(add(e.clone(), x.clone()), a.clone()),
        eq(
            mul(nat(2u32), mul(a.clone(), x.clone())),
            add(t.clone(), add(sq(&x), nat(1u32))),
        ),
        lt(w.clone(), t.clone()),
        pell_xy_formula().instantiate(&[a, y, xx.clone(), yy.clone()]),
        mod_cong(xx, add(mul(yy, e), w), t),
    ]);
    let chain = exists(exists(exists(exists(exists(exists(exists(body)))))));
    let d1 = and(eq(var(1), nat(0u32)), eq(var(2), nat(1u32)));
    let d2 = and(lt(nat(0u32), var(1)), and(eq(var(0), nat(0u32)), eq(var(2), nat(0u32))));
    let d3 = and(lt(nat(0u32), var(1)), and(lt(nat(0u32), var(0)), chain));
    or(d1, or(d2, d3))
}

/// [`pow_formula`] compiled: a single polynomial over `x, y, w` and the
/// dummy block whose zeros over the naturals are exactly the triples with
/// `w = x^y`.
pub fn pow_polynomial() -> CompiledDioph {
    compile(&pow_formula(), 3).expect("the power formula is well scoped")
}

pub(crate) fn congruent(a: &BigUint, b: &BigUint, m: &BigUint) -> bool {
    if m.is_zero() {
        a == b
    } else {
        a % m == b % m
    }
}

pub(crate) fn divides(m: &BigUint, n: &BigUint) -> bool {
    if m.is_zero() {
        n.is_zero()
    } else {
        (n % m).is_zero()
    }
}

/// Checks the ten clauses of the inner system at `(a, k, x, y)` against a
/// candidate witness, with direct integer arithmetic only. Returns the
/// clauses that fail, empty when the witness is valid.
pub fn check_theorem3_witness(
    a: &BigUint,
    k: &BigUint,
    x: &BigUint,
    y: &BigUint,
    wit: &PellWitness,
) -> Vec<&'static str> {
    let PellWitness { u, v, s, t, b } = wit;
    let sq = |z: &BigUint| z * z;
    let pell = |x: &BigUint, y: &BigUint, c: &BigUint| sq(x) + sq(y) == sq(c) * sq(y) + 1u32;
    let four_y = BigUint::from(4u32) * y;
    let mut bad = Vec::new();
    if !pell(x, y, a) {
        bad.push("x^2 + y^2 = 1 + a^2*y^2");
    }
    if !pell(u, v, a) {
        bad.push("u^2 + v^2 = 1 + a^2*v^2");
    }
    if !pell(s, t, b) {
        bad.push("s^2 + t^2 = 1 + b^2*t^2");
    }
    if b <= &BigUint::one() {
        bad.push("1 < b");
    }
    if !congruent(b, &BigUint::one(), &four_y) {
        bad.push("b = 1 (mod 4y)");
    }
    if !congruent(b, a, u) {
        bad.push("b = a (mod u)");
    }
    if v.is_zero() {
        bad.push("0 < v");
    }
    if !divides(&sq(y), v) {
        bad.push("y^2 | v");
    }
    if !congruent(s, x, u) {
        bad.push("s = x (mod u)");
    }
    if !congruent(t, k, &four_y) {
        bad.push("t = k (mod 4y)");
    }
    bad
}

/// Checks a full witness for the nontrivial branch of [`pow_formula`] at
/// `(x, y, w)`, again by direct arithmetic. `outer` holds the values of
/// `W, a, T, Z, X, Y, E` in binding order; `inner` witnesses the embedded
/// Pell-graph instance `(a, y, X, Y)`. Returns the failing clauses.
pub fn check_pow_witness(
    x: &BigUint,
    y: &BigUint,
    w: &BigUint,
    outer: &[BigUint; 7],
    inner: &PellWitness,
) -> Vec<&'static str> {
    let [_, a, _, _, xx, yy, _] = outer;
    let mut bad = check_pow_outer(x, y, w, outer);
    bad.extend(check_theorem3_witness(a, y, xx, yy, inner));
    bad
}

/// The clauses of [`check_pow_witness`] that mention only `x, y, w` and the
/// seven outer values, skipping the embedded Pell-graph instance.
pub(crate) fn check_pow_outer(
    x: &BigUint,
    y: &BigUint,
    w: &BigUint,
    outer: &[BigUint; 7],
) -> Vec<&'static str> {
    let [w_cap, a, t, z, xx, yy, e] = outer;
    let sq = |z: &BigUint| z * z;
    let mut bad = Vec::new();
    if a <= &BigUint::one() {
        bad.push("1 < a");
    }
    if x > w_cap {
        bad.push("x <= W");
    }
    if y > w_cap {
        bad.push("y <= W");
    }
    let wz = w_cap * z;
    if sq(a) + sq(&wz) != sq(&(w_cap + 1u32)) * sq(&wz) + 1u32 {
        bad.push("a^2 + (W*Z)^2 = 1 + (W+1)^2*(W*Z)^2");
    }
    if &(e + x) != a {
        bad.push("E + x = a");
    }
    if BigUint::from(2u32) * a * x != t + sq(x) + 1u32 {
        bad.push("2*a*x = T + x^2 + 1");
    }
    if w >= t {
        bad.push("w < T");
    }
    if y > yy {
        bad.push("y <= Y");
    }
    if !congruent(xx, &(yy * e + w), t) {
        bad.push("X = Y*E + w (mod T)");
    }
    bad
}
