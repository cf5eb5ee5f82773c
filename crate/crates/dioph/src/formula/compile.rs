//! Compilation of formulas to single integer polynomials.
//!
//! For a formula with `k` parameters the compiler produces a polynomial over
//! `k + m` variables, parameters first, such that a parameter vector
//! satisfies the formula exactly when some assignment of naturals to the `m`
//! dummy variables makes the polynomial zero. The translation desugars every
//! atom to the core `=` / `and` / `or` / `exists` fragment and then uses the
//! classical identities: a conjunction is a sum in which any operand that is
//! not already provably nonnegative gets squared, a disjunction is a
//! product, and an existential reclassifies its bound variable as a dummy.
//!
//! Desugared atoms and their dummies, in order:
//!
//! ```text
//! t1 <= t2      one slack:     t1 + z - t2
//! t1 <  t2      one slack:     t1 + z + 1 - t2
//! t1 != t2      two slacks:    (t1 + z + 1 - t2) * (t2 + z' + 1 - t1)
//! t1 dvd t2     one quotient:  t1 * z - t2
//! mod=          two quotients: (t1 - t2 - t3 * z) * (t2 - t1 - t3 * z')
//! ```
//!
//! Dummy layout is deterministic: within `and`/`or`, the left operand's
//! dummies precede the right's; an `exists`-bound variable becomes the last
//! dummy of its block. The compiled polynomial, its JSON rendering and the
//! witness utilities below all follow this layout.
//!
//! Squaring only the sign-indefinite operands of a conjunction keeps the
//! expanded polynomial far smaller than squaring unconditionally, without
//! changing the zero set: a sum of nonnegative operands vanishes exactly
//! when all of them do. The nonnegativity certificate is structural
//! (squares, and sums/products of certified operands, are certified).

use super::{Formula, Term};
use crate::poly::{MonomialRepr, Poly, PolyRepr};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("formula is not well scoped over {params} parameters")]
    Scope { params: usize },
    #[error("invalid compiled-formula JSON: {0}")]
    Json(String),
}

/// A compiled formula: the polynomial, the variable split, and (when it was
/// produced by [`compile`] rather than deserialized) the source formula and
/// an unexpanded product tree for fast evaluation at very large points.
#[derive(Debug, Clone)]
pub struct CompiledDioph {
    params: usize,
    dummies: usize,
    poly: Poly,
    expr: Option<PolyExpr>,
    source: Option<Formula>,
}

/// Result of a capped membership scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipOutcome {
    /// Lexicographically first dummy vector making the polynomial zero.
    Found(Vec<BigUint>),
    /// The whole box was scanned without finding a zero.
    Exhausted,
    /// The evaluation budget ran out first.
    CapHit { evaluated: u64 },
}

/// Unexpanded combination tree over polynomial leaves. Expanding the
/// product of all disjuncts can be large; evaluating the tree is cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
enum PolyExpr {
    Leaf(Poly),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Square(Box<PolyExpr>),
}

impl PolyExpr {
    fn remap(&self, map: &[usize], n: usize) -> PolyExpr {
        match self {
            PolyExpr::Leaf(p) => {
                PolyExpr::Leaf(p.remap(map, n).expect("compiler-generated remaps are valid"))
            }
            PolyExpr::Add(a, b) => {
                PolyExpr::Add(Box::new(a.remap(map, n)), Box::new(b.remap(map, n)))
            }
            PolyExpr::Mul(a, b) => {
                PolyExpr::Mul(Box::new(a.remap(map, n)), Box::new(b.remap(map, n)))
            }
            PolyExpr::Square(a) => PolyExpr::Square(Box::new(a.remap(map, n))),
        }
    }

    fn expand(&self) -> Poly {
        match self {
            PolyExpr::Leaf(p) => p.clone(),
            PolyExpr::Add(a, b) => a.expand().p_add(&b.expand()),
            PolyExpr::Mul(a, b) => a.expand().p_mul(&b.expand()),
            PolyExpr::Square(a) => {
                let p = a.expand();
                p.p_mul(&p)
            }
        }
    }

    fn eval(&self, point: &[BigUint]) -> BigInt {
        match self {
            PolyExpr::Leaf(p) => p.eval(point).expect("tree leaves share one arity"),
            PolyExpr::Add(a, b) => a.eval(point) + b.eval(point),
            PolyExpr::Mul(a, b) => a.eval(point) * b.eval(point),
            PolyExpr::Square(a) => {
                let v = a.eval(point);
                &v * &v
            }
        }
    }
}

fn term_poly(t: &Term, num_vars: usize) -> Poly {
    match t {
        Term::Const(c) => Poly::constant(BigInt::from(c.clone()), num_vars),
        Term::Var(i) => Poly::var(*i, num_vars),
        Term::Add(a, b) => term_poly(a, num_vars).p_add(&term_poly(b, num_vars)),
        Term::Mul(a, b) => term_poly(a, num_vars).p_mul(&term_poly(b, num_vars)),
    }
}

/// Rewrites into the core `=` / `and` / `or` / `exists` fragment. Each
/// rewrite is an exact equivalence over the naturals, including the
/// degenerate cases: `0 | t` forces `t = 0`, and a congruence modulo 0
/// forces equality.
fn desugar(f: &Formula) -> Formula {
    use super::{add, eq, exists, mul, or, var};
    match f {
        Formula::Eq(a, b) => Formula::Eq(a.clone(), b.clone()),
        Formula::Le(a, b) => exists(eq(add(a.shift(1), var(0)), b.shift(1))),
        Formula::Lt(a, b) => exists(eq(
            add(add(a.shift(1), var(0)), nat_one()),
            b.shift(1),
        )),
        Formula::Ne(a, b) => desugar(&or(
            Formula::Lt(a.clone(), b.clone()),
            Formula::Lt(b.clone(), a.clone()),
        )),
        Formula::Dvd(a, b) => exists(eq(mul(a.shift(1), var(0)), b.shift(1))),
        Formula::ModCong(a, b, m) => or(
            exists(eq(a.shift(1), add(b.shift(1), mul(m.shift(1), var(0))))),
            exists(eq(b.shift(1), add(a.shift(1), mul(m.shift(1), var(0))))),
        ),
        Formula::And(f, g) => Formula::And(Box::new(desugar(f)), Box::new(desugar(g))),
        Formula::Or(f, g) => Formula::Or(Box::new(desugar(f)), Box::new(desugar(g))),
        Formula::Exists(f) => Formula::Exists(Box::new(desugar(f))),
    }
}

fn nat_one() -> Term {
    Term::Const(BigUint::from(1u32))
}

struct Piece {
    expr: PolyExpr,
    dummies: usize,
    certified: bool,
}

/// Remaps two sibling pieces into a shared variable space: `params` stay
/// put, the left block keeps its dummy positions, the right block shifts
/// past it.
fn align(l: Piece, r: Piece, params: usize) -> (PolyExpr, PolyExpr, usize) {
    let total = l.dummies + r.dummies;
    let n = params + total;
    let lmap: Vec<usize> = (0..params + l.dummies).collect();
    let mut rmap: Vec<usize> = (0..params).collect();
    rmap.extend((0..r.dummies).map(|j| params + l.dummies + j));
    (l.expr.remap(&lmap, n), r.expr.remap(&rmap, n), total)
}

fn compile_core(f: &Formula, params: usize) -> Piece {
    match f {
        Formula::Eq(a, b) => {
            let p = term_poly(a, params).p_sub(&term_poly(b, params));
            Piece { expr: PolyExpr::Leaf(p), dummies: 0, certified: false }
        }
        Formula::And(f, g) => {
            let l = compile_core(f, params);
            let r = compile_core(g, params);
            let (lc, rc) = (l.certified, r.certified);
            let (le, re, dummies) = align(l, r, params);
            let sq = |e: PolyExpr, cert: bool| {
                if cert {
                    e
                } else {
                    PolyExpr::Square(Box::new(e))
                }
            };
            Piece {
                expr: PolyExpr::Add(Box::new(sq(le, lc)), Box::new(sq(re, rc))),
                dummies,
                certified: true,
            }
        }
        Formula::Or(f, g) => {
            let l = compile_core(f, params);
            let r = compile_core(g, params);
            let certified = l.certified && r.certified;
            let (le, re, dummies) = align(l, r, params);
            Piece { expr: PolyExpr::Mul(Box::new(le), Box::new(re)), dummies, certified }
        }
        Formula::Exists(body) => {
            let b = compile_core(body, params + 1);
            let m = b.dummies;
            let mut map = Vec::with_capacity(params + 1 + m);
            map.push(params + m);
            map.extend(0..params);
            map.extend((0..m).map(|j| params + j));
            Piece {
                expr: b.expr.remap(&map, params + 1 + m),
                dummies: m + 1,
                certified: b.certified,
            }
        }
        other => unreachable!("desugared formula contains {:?}", other),
    }
}

/// Compiles a formula over `k` parameters into a single polynomial.
pub fn compile(f: &Formula, params: usize) -> Result<CompiledDioph, CompileError> {
    if !f.well_scoped(params) {
        return Err(CompileError::Scope { params });
    }
    let piece = compile_core(&desugar(f), params);
    let poly = piece.expr.expand();
    Ok(CompiledDioph {
        params,
        dummies: piece.dummies,
        poly,
        expr: Some(piece.expr),
        source: Some(f.clone()),
    })
}

impl Formula {
    /// Number of dummy variables [`compile`] will allocate, determined by
    /// the fixed layout.
    pub fn dummy_count(&self) -> usize {
        match self {
            Formula::Eq(..) => 0,
            Formula::Le(..) | Formula::Lt(..) | Formula::Dvd(..) => 1,
            Formula::Ne(..) | Formula::ModCong(..) => 2,
            Formula::And(f, g) | Formula::Or(f, g) => f.dummy_count() + g.dummy_count(),
            Formula::Exists(f) => f.dummy_count() + 1,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CompiledRepr {
    params: usize,
    dummies: usize,
    num_vars: usize,
    monomials: Vec<MonomialRepr>,
}

impl CompiledDioph {
    pub fn params(&self) -> usize {
        self.params
    }

    pub fn dummies(&self) -> usize {
        self.dummies
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// The source formula, kept only by [`compile`]; deserialized values
    /// carry the polynomial alone.
    pub fn source(&self) -> Option<&Formula> {
        self.source.as_ref()
    }

    /// Value at `parameters ++ dummies`, through the unexpanded tree when
    /// available (much faster for points with huge entries).
    pub fn eval(&self, point: &[BigUint]) -> BigInt {
        assert_eq!(point.len(), self.params + self.dummies, "point arity");
        match &self.expr {
            Some(e) => e.eval(point),
            None => self.poly.eval(point).expect("arity checked above"),
        }
    }

    /// Value of the expanded polynomial at `parameters ++ dummies`.
    pub fn eval_expanded(&self, point: &[BigUint]) -> BigInt {
        self.poly.eval(point).expect("point arity matches")
    }

    /// Lexicographically first dummy vector (entries `<= bound`) zeroing
    /// the polynomial.
    pub fn membership(&self, v: &[BigUint], bound: &BigUint) -> Option<Vec<BigUint>> {
        match self.membership_capped(v, bound, u64::MAX) {
            MembershipOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    /// As [`membership`](Self::membership), but giving up after `cap`
    /// evaluations.
    pub fn membership_capped(&self, v: &[BigUint], bound: &BigUint, cap: u64) -> MembershipOutcome {
        self.scan(v, &vec![bound.clone(); self.dummies], cap)
    }

    pub(crate) fn scan(&self, v: &[BigUint], bounds: &[BigUint], cap: u64) -> MembershipOutcome {
        assert_eq!(v.len(), self.params, "parameter arity");
        assert_eq!(bounds.len(), self.dummies, "one bound per dummy");
        let mut point: Vec<BigUint> = v.to_vec();
        point.resize(self.params + self.dummies, BigUint::zero());
        let mut evaluated = 0u64;
        loop {
            if evaluated >= cap {
                return MembershipOutcome::CapHit { evaluated };
            }
            evaluated += 1;
            if self.eval(&point).is_zero() {
                return MembershipOutcome::Found(point[self.params..].to_vec());
            }
            let mut i = self.dummies;
            loop {
                if i == 0 {
                    return MembershipOutcome::Exhausted;
                }
                i -= 1;
                if point[self.params + i] < bounds[i] {
                    point[self.params + i] += 1u32;
                    break;
                }
                point[self.params + i] = BigUint::zero();
            }
        }
    }

    fn require_source(&self, what: &str) -> &Formula {
        self.source.as_ref().unwrap_or_else(|| {
            panic!("{} needs the source formula; this value was deserialized from JSON", what)
        })
    }

    /// Per-dummy bounds such that whenever the source formula holds at `v`
    /// with every existential witness at most `bound`, some dummy vector
    /// within these bounds zeroes the polynomial. Monotone in `bound`.
    pub fn witness_hints(&self, v: &[BigUint], bound: &BigUint) -> Vec<BigUint> {
        let src = self.require_source("witness_hints");
        assert_eq!(v.len(), self.params, "parameter arity");
        let mut benv: Vec<BigUint> = v.iter().rev().cloned().collect();
        hint_rec(src, &mut benv, bound)
    }

    /// The largest per-dummy bound, as a single scalar.
    pub fn witness_hint(&self, v: &[BigUint], bound: &BigUint) -> BigUint {
        self.witness_hints(v, bound).into_iter().max().unwrap_or_default()
    }

    /// Searches existential witnesses up to `bound` and, on success, builds
    /// the full dummy vector (slacks and quotients computed exactly).
    /// Succeeds exactly when `eval_bounded` is true.
    pub fn find_witness(&self, v: &[BigUint], bound: &BigUint) -> Option<Vec<BigUint>> {
        let src = self.require_source("find_witness");
        assert_eq!(v.len(), self.params, "parameter arity");
        let mut env: Vec<BigUint> = v.iter().rev().cloned().collect();
        extract(src, &mut env, Mode::Search(bound))
    }

    /// Builds the full dummy vector from given existential values, one per
    /// quantifier in syntactic pre-order (outermost first, left to right).
    /// Returns `None` when the hinted assignment does not satisfy the
    /// formula.
    pub fn extract_with_hints(&self, v: &[BigUint], hints: &[BigUint]) -> Option<Vec<BigUint>> {
        let src = self.require_source("extract_with_hints");
        assert_eq!(v.len(), self.params, "parameter arity");
        assert_eq!(hints.len(), src.exists_count(), "one hint per existential");
        let mut env: Vec<BigUint> = v.iter().rev().cloned().collect();
        extract(src, &mut env, Mode::Given(hints))
    }

    pub fn to_json(&self) -> String {
        let repr = CompiledRepr {
            params: self.params,
            dummies: self.dummies,
            num_vars: self.poly.num_vars(),
            monomials: PolyRepr::from(&self.poly).monomials,
        };
        serde_json::to_string(&repr).expect("compiled formula serializes")
    }

    /// Reads the JSON form back. The result supports evaluation and
    /// membership scans but not the source-formula utilities.
    pub fn from_json(s: &str) -> Result<CompiledDioph, CompileError> {
        let repr: CompiledRepr =
            serde_json::from_str(s).map_err(|e| CompileError::Json(e.to_string()))?;
        if repr.params + repr.dummies != repr.num_vars {
            return Err(CompileError::Json(format!(
                "params {} + dummies {} != num_vars {}",
                repr.params, repr.dummies, repr.num_vars
            )));
        }
        let poly = Poly::try_from(PolyRepr { num_vars: repr.num_vars, monomials: repr.monomials })
            .map_err(|e| CompileError::Json(e.to_string()))?;
        Ok(CompiledDioph {
            params: repr.params,
            dummies: repr.dummies,
            poly,
            expr: None,
            source: None,
        })
    }
}

fn hint_rec(f: &Formula, benv: &mut Vec<BigUint>, bound: &BigUint) -> Vec<BigUint> {
    match f {
        Formula::Eq(..) => Vec::new(),
        Formula::Le(_, t2) | Formula::Lt(_, t2) | Formula::Dvd(_, t2) => vec![t2.eval(benv)],
        Formula::Ne(t1, t2) => vec![t2.eval(benv), t1.eval(benv)],
        Formula::ModCong(t1, t2, _) => vec![t1.eval(benv), t2.eval(benv)],
        Formula::And(f, g) | Formula::Or(f, g) => {
            let mut h = hint_rec(f, benv, bound);
            h.extend(hint_rec(g, benv, bound));
            h
        }
        Formula::Exists(body) => {
            benv.push(bound.clone());
            let mut h = hint_rec(body, benv, bound);
            benv.pop();
            h.push(bound.clone());
            h
        }
    }
}

#[derive(Clone, Copy)]
enum Mode<'a> {
    Search(&'a BigUint),
    Given(&'a [BigUint]),
}

impl<'a> Mode<'a> {
    fn split(self, left: &Formula) -> (Mode<'a>, Mode<'a>) {
        match self {
            Mode::Search(b) => (Mode::Search(b), Mode::Search(b)),
            Mode::Given(hints) => {
                let (l, r) = hints.split_at(left.exists_count());
                (Mode::Given(l), Mode::Given(r))
            }
        }
    }
}

fn zeros(n: usize) -> Vec<BigUint> {
    vec![BigUint::zero(); n]
}

/// Computes a dummy vector for `f`'s block, or `None` when `f` is false
/// under `env` (within the mode's witness budget).
fn extract(f: &Formula, env: &mut Vec<BigUint>, mode: Mode<'_>) -> Option<Vec<BigUint>> {
    match f {
        Formula::Eq(a, b) => (a.eval(env) == b.eval(env)).then(Vec::new),
        Formula::Le(a, b) => {
            let (a, b) = (a.eval(env), b.eval(env));
            (a <= b).then(|| vec![b - a])
        }
        Formula::Lt(a, b) => {
            let (a, b) = (a.eval(env), b.eval(env));
            (a < b).then(|| vec![b - a - 1u32])
        }
        Formula::Ne(a, b) => {
            let (a, b) = (a.eval(env), b.eval(env));
            if a < b {
                Some(vec![b - a - 1u32, BigUint::zero()])
            } else if b < a {
                Some(vec![BigUint::zero(), a - b - 1u32])
            } else {
                None
            }
        }
        Formula::Dvd(a, b) => {
            let (a, b) = (a.eval(env), b.eval(env));
            if a.is_zero() {
                b.is_zero().then(|| zeros(1))
            } else if (&b % &a).is_zero() {
                Some(vec![b / a])
            } else {
                None
            }
        }
        Formula::ModCong(a, b, m) => {
            let (a, b, m) = (a.eval(env), b.eval(env), m.eval(env));
            if m.is_zero() {
                return (a == b).then(|| zeros(2));
            }
            if a >= b && ((&a - &b) % &m).is_zero() {
                Some(vec![(a - b) / m, BigUint::zero()])
            } else if b > a && ((&b - &a) % &m).is_zero() {
                Some(vec![BigUint::zero(), (b - a) / m])
            } else {
                None
            }
        }
        Formula::And(l, r) => {
            let (ml, mr) = mode.split(l);
            let mut lv = extract(l, env, ml)?;
            let rv = extract(r, env, mr)?;
            lv.extend(rv);
            Some(lv)
        }
        Formula::Or(l, r) => {
            let (ml, mr) = mode.split(l);
            if let Some(mut lv) = extract(l, env, ml) {
                lv.extend(zeros(r.dummy_count()));
                return Some(lv);
            }
            let rv = extract(r, env, mr)?;
            let mut out = zeros(l.dummy_count());
            out.extend(rv);
            Some(out)
        }
        Formula::Exists(body) => match mode {
            Mode::Search(bound) => {
                let mut x = BigUint::zero();
                loop {
                    env.push(x.clone());
                    let found = extract(body, env, mode);
                    env.pop();
                    if let Some(mut vals) = found {
                        vals.push(x);
                        return Some(vals);
                    }
                    if &x == bound {
                        return None;
                    }
                    x += 1u32;
                }
            }
            Mode::Given(hints) => {
                let (x, rest) = hints.split_first().expect("hint count checked at entry");
                env.push(x.clone());
                let found = extract(body, env, Mode::Given(rest));
                env.pop();
                found.map(|mut vals| {
                    vals.push(x.clone());
                    vals
                })
            }
        },
    }
}
