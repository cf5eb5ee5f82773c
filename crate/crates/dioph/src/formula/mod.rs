//! A first-order language of Diophantine formulas over the naturals.
//!
//! Terms are built from constants, variables, `+` and `*`; formulas from the
//! atoms `=`, `<=`, `<`, `!=`, divisibility and congruence, closed under
//! conjunction, disjunction and existential quantification. Variables are de
//! Bruijn indices: index 0 is the innermost binder, and a formula with `k`
//! free parameters uses indices `depth..depth+k` under `depth` binders.
//!
//! Semantics are over the natural numbers only. Integer-valued problems are
//! expressed by the caller, for instance through the classical four-square
//! trick ([`four_squares`] is the brute-force witness for it). Negation is
//! deliberately absent: complements of Diophantine sets need not be
//! Diophantine.
//!
//! Two consumers give the language teeth. [`Formula::eval_bounded`] is the
//! direct evaluator, exact on atoms, with each existential scanned up to a
//! bound; it is the oracle everything else is judged against. The
//! [`compile`](crate::formula::compile) submodule translates a formula to a
//! single polynomial whose zero set over the naturals is the defined set.

pub mod compile;
pub mod corpus;
pub mod sexp;

pub use compile::{compile, CompiledDioph, MembershipOutcome};

use num_bigint::BigUint;
use num_traits::Zero;

/// A natural-number term: constants, de Bruijn variables, sums, products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Const(BigUint),
    Var(usize),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// A Diophantine formula. `ModCong(a, b, m)` is `a ≡ b (mod m)`, with the
/// degenerate modulus 0 read as equality. `Exists` binds index 0 of its
/// body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    Lt(Term, Term),
    Ne(Term, Term),
    Dvd(Term, Term),
    ModCong(Term, Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Box<Formula>),
}

impl From<u64> for Term {
    fn from(n: u64) -> Term {
        Term::Const(BigUint::from(n))
    }
}

impl From<BigUint> for Term {
    fn from(n: BigUint) -> Term {
        Term::Const(n)
    }
}

pub fn var(i: usize) -> Term {
    Term::Var(i)
}

pub fn nat(n: impl Into<BigUint>) -> Term {
    Term::Const(n.into())
}

pub fn add(a: impl Into<Term>, b: impl Into<Term>) -> Term {
    Term::Add(Box::new(a.into()), Box::new(b.into()))
}

pub fn mul(a: impl Into<Term>, b: impl Into<Term>) -> Term {
    Term::Mul(Box::new(a.into()), Box::new(b.into()))
}

pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Eq(a.into(), b.into())
}

pub fn le(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Le(a.into(), b.into())
}

pub fn lt(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Lt(a.into(), b.into())
}

pub fn ne(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Ne(a.into(), b.into())
}

pub fn dvd(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
    Formula::Dvd(a.into(), b.into())
}

pub fn mod_cong(a: impl Into<Term>, b: impl Into<Term>, m: impl Into<Term>) -> Formula {
    Formula::ModCong(a.into(), b.into(), m.into())
}

pub fn and(f: Formula, g: Formula) -> Formula {
    Formula::And(Box::new(f), Box::new(g))
}

pub fn or(f: Formula, g: Formula) -> Formula {
    Formula::Or(Box::new(f), Box::new(g))
}

pub fn exists(f: Formula) -> Formula {
    Formula::Exists(Box::new(f))
}

/// Left-folded conjunction of one or more formulas.
pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    let first = it.next().expect("and_all needs at least one conjunct");
    it.fold(first, and)
}

/// Left-folded disjunction of one or more formulas.
pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    let first = it.next().expect("or_all needs at least one disjunct");
    it.fold(first, or)
}

impl Term {
    /// Value under an environment stack whose last element is the innermost
    /// binding (so `Var(i)` reads `env[env.len() - 1 - i]`).
    pub(crate) fn eval(&self, env: &[BigUint]) -> BigUint {
        match self {
            Term::Const(c) => c.clone(),
            Term::Var(i) => env[env.len() - 1 - i].clone(),
            Term::Add(a, b) => a.eval(env) + b.eval(env),
            Term::Mul(a, b) => a.eval(env) * b.eval(env),
        }
    }

    fn scoped(&self, limit: usize) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(i) => *i < limit,
            Term::Add(a, b) | Term::Mul(a, b) => a.scoped(limit) && b.scoped(limit),
        }
    }

    /// Adds `by` to every variable index.
    fn shift(&self, by: usize) -> Term {
        match self {
            Term::Const(c) => Term::Const(c.clone()),
            Term::Var(i) => Term::Var(i + by),
            Term::Add(a, b) => Term::Add(Box::new(a.shift(by)), Box::new(b.shift(by))),
            Term::Mul(a, b) => Term::Mul(Box::new(a.shift(by)), Box::new(b.shift(by))),
        }
    }

    fn subst(&self, depth: usize, args: &[Term]) -> Term {
        match self {
            Term::Const(c) => Term::Const(c.clone()),
            Term::Var(i) => {
                if *i < depth {
                    Term::Var(*i)
                } else {
                    args.get(i - depth)
                        .unwrap_or_else(|| {
                            panic!("instantiate: index {} exceeds {} arguments", i, args.len())
                        })
                        .shift(depth)
                }
            }
            Term::Add(a, b) => Term::Add(Box::new(a.subst(depth, args)), Box::new(b.subst(depth, args))),
            Term::Mul(a, b) => Term::Mul(Box::new(a.subst(depth, args)), Box::new(b.subst(depth, args))),
        }
    }
}

impl Formula {
    /// Whether every variable index stays below `params` plus the number of
    /// enclosing binders.
    pub fn well_scoped(&self, params: usize) -> bool {
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Ne(a, b)
            | Formula::Dvd(a, b) => a.scoped(params) && b.scoped(params),
            Formula::ModCong(a, b, m) => {
                a.scoped(params) && b.scoped(params) && m.scoped(params)
            }
            Formula::And(f, g) | Formula::Or(f, g) => {
                f.well_scoped(params) && g.well_scoped(params)
            }
            Formula::Exists(f) => f.well_scoped(params + 1),
        }
    }

    /// Number of existential quantifiers, counted syntactically.
    pub fn exists_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::Ne(..)
            | Formula::Dvd(..) | Formula::ModCong(..) => 0,
            Formula::And(f, g) | Formula::Or(f, g) => f.exists_count() + g.exists_count(),
            Formula::Exists(f) => f.exists_count() + 1,
        }
    }

    /// Replaces the formula's free parameters by `args` (which are terms in
    /// the caller's scope), renumbering binder-crossing indices. The result
    /// is a formula over the caller's parameters. Panics when the formula
    /// has more free parameters than arguments given.
    pub fn instantiate(&self, args: &[Term]) -> Formula {
        self.subst(0, args)
    }

    fn subst(&self, depth: usize, args: &[Term]) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.subst(depth, args), b.subst(depth, args)),
            Formula::Le(a, b) => Formula::Le(a.subst(depth, args), b.subst(depth, args)),
            Formula::Lt(a, b) => Formula::Lt(a.subst(depth, args), b.subst(depth, args)),
            Formula::Ne(a, b) => Formula::Ne(a.subst(depth, args), b.subst(depth, args)),
            Formula::Dvd(a, b) => Formula::Dvd(a.subst(depth, args), b.subst(depth, args)),
            Formula::ModCong(a, b, m) => Formula::ModCong(
                a.subst(depth, args),
                b.subst(depth, args),
                m.subst(depth, args),
            ),
            Formula::And(f, g) => Formula::And(
                Box::new(f.subst(depth, args)),
                Box::new(g.subst(depth, args)),
            ),
            Formula::Or(f, g) => Formula::Or(
                Box::new(f.subst(depth, args)),
                Box::new(g.subst(depth, args)),
            ),
            Formula::Exists(f) => Formula::Exists(Box::new(f.subst(depth + 1, args))),
        }
    }

    /// Truth value with every existential restricted to `0..=bound`.
    ///
    /// Atoms are exact (divisibility and congruence do not spend a bound),
    /// so the result is monotone in `bound` and agrees with the true
    /// unbounded semantics whenever some witness assignment fits under the
    /// bound.
    pub fn eval_bounded(&self, v: &[BigUint], bound: &BigUint) -> bool {
        assert!(
            self.well_scoped(v.len()),
            "formula is not well scoped over {} parameters",
            v.len()
        );
        let mut env: Vec<BigUint> = v.iter().rev().cloned().collect();
        self.eval_in(&mut env, bound)
    }

    fn eval_in(&self, env: &mut Vec<BigUint>, bound: &BigUint) -> bool {
        match self {
            Formula::Eq(a, b) => a.eval(env) == b.eval(env),
            Formula::Le(a, b) => a.eval(env) <= b.eval(env),
            Formula::Lt(a, b) => a.eval(env) < b.eval(env),
            Formula::Ne(a, b) => a.eval(env) != b.eval(env),
            Formula::Dvd(a, b) => {
                let a = a.eval(env);
                let b = b.eval(env);
                if a.is_zero() {
                    b.is_zero()
                } else {
                    (b % a).is_zero()
                }
            }
            Formula::ModCong(a, b, m) => {
                let m = m.eval(env);
                let a = a.eval(env);
                let b = b.eval(env);
                if m.is_zero() {
                    a == b
                } else {
                    a % &m == b % &m
                }
            }
            Formula::And(f, g) => f.eval_in(env, bound) && g.eval_in(env, bound),
            Formula::Or(f, g) => f.eval_in(env, bound) || g.eval_in(env, bound),
            Formula::Exists(f) => {
                let mut x = BigUint::zero();
                loop {
                    env.push(x.clone());
                    let ok = f.eval_in(env, bound);
                    env.pop();
                    if ok {
                        return true;
                    }
                    if &x == bound {
                        return false;
                    }
                    x += 1u32;
                }
            }
        }
    }
}

/// The lexicographically first `(x, y, z, w)` with `x^2+y^2+z^2+w^2 = n`.
///
/// Lagrange's theorem makes this total. The scan enumerates sorted
/// quadruples `x <= y <= z <= w` in lexicographic order, which suffices: in
/// any unsorted decomposition, swapping an out-of-order pair lexicographically
/// decreases it, so the global lexicographic minimum is sorted.
pub fn four_squares(n: u64) -> (u64, u64, u64, u64) {
    for x in 0..=n.isqrt() {
        let rx = n - x * x;
        for y in x..=rx.isqrt() {
            let rxy = rx - y * y;
            for z in y..=rxy.isqrt() {
                let rem = rxy - z * z;
                let w = rem.isqrt();
                if w * w == rem && w >= z {
                    return (x, y, z, w);
                }
            }
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn vals(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn bounded_exists_examples() {
        let f = exists(eq(add(var(0), var(1)), nat(5u32)));
        assert!(f.eval_bounded(&vals(&[3]), &b(10)));
        assert!(!f.eval_bounded(&vals(&[3]), &b(1)));
        assert!(f.eval_bounded(&vals(&[3]), &b(2)), "bound is inclusive");
    }

    #[test]
    fn dvd_is_exact() {
        let f = dvd(var(0), var(1));
        assert!(f.eval_bounded(&vals(&[3, 12]), &b(20)));
        assert!(f.eval_bounded(&vals(&[3, 12]), &b(0)), "no bound is spent on atoms");
        assert!(!f.eval_bounded(&vals(&[5, 12]), &b(100)));
        assert!(f.eval_bounded(&vals(&[0, 0]), &b(0)), "0 divides only 0");
        assert!(!f.eval_bounded(&vals(&[0, 3]), &b(100)));
        assert!(f.eval_bounded(&vals(&[7, 0]), &b(0)), "everything divides 0");
    }

    #[test]
    fn mod_cong_is_exact_and_symmetric() {
        let f = mod_cong(var(0), var(1), var(2));
        assert!(f.eval_bounded(&vals(&[7, 19, 12]), &b(0)));
        assert!(f.eval_bounded(&vals(&[19, 7, 12]), &b(0)));
        assert!(!f.eval_bounded(&vals(&[7, 18, 12]), &b(0)));
        assert!(f.eval_bounded(&vals(&[5, 5, 0]), &b(0)), "mod 0 means equality");
        assert!(!f.eval_bounded(&vals(&[5, 6, 0]), &b(0)));
    }

    #[test]
    fn comparison_atoms() {
        assert!(le(var(0), var(1)).eval_bounded(&vals(&[4, 4]), &b(0)));
        assert!(!lt(var(0), var(1)).eval_bounded(&vals(&[4, 4]), &b(0)));
        assert!(lt(var(0), var(1)).eval_bounded(&vals(&[3, 4]), &b(0)));
        assert!(ne(var(0), var(1)).eval_bounded(&vals(&[3, 4]), &b(0)));
        assert!(!ne(var(0), var(1)).eval_bounded(&vals(&[4, 4]), &b(0)));
    }

    #[test]
    fn connectives() {
        let f = and(le(nat(2u32), var(0)), exists(eq(mul(var(0), nat(2u32)), var(1))));
        assert!(f.eval_bounded(&vals(&[6]), &b(3)));
        assert!(!f.eval_bounded(&vals(&[6]), &b(2)));
        assert!(!f.eval_bounded(&vals(&[1]), &b(100)));
        let g = or(eq(var(0), nat(1u32)), eq(var(0), nat(6u32)));
        assert!(g.eval_bounded(&vals(&[6]), &b(0)));
        assert!(!g.eval_bounded(&vals(&[2]), &b(0)));
    }

    #[test]
    fn monotone_in_bound() {
        let f = exists(exists(eq(
            add(mul(var(0), var(0)), var(1)),
            var(2),
        )));
        let v = vals(&[20]);
        let mut seen_true = false;
        for bb in 0..=6u64 {
            let now = f.eval_bounded(&v, &b(bb));
            assert!(!seen_true || now, "monotonicity violated at bound {}", bb);
            seen_true |= now;
        }
        assert!(seen_true);
    }

    #[test]
    fn scope_checks() {
        assert!(eq(var(1), nat(0u32)).well_scoped(2));
        assert!(!eq(var(2), nat(0u32)).well_scoped(2));
        assert!(exists(eq(var(2), nat(0u32))).well_scoped(2));
        assert!(!exists(eq(var(3), nat(0u32))).well_scoped(2));
        assert_eq!(exists(and(exists(eq(var(0), var(1))), eq(var(0), var(0)))).exists_count(), 2);
    }

    #[test]
    #[should_panic(expected = "not well scoped")]
    fn eval_rejects_out_of_scope() {
        let _ = eq(var(1), nat(0u32)).eval_bounded(&vals(&[5]), &b(1));
    }

    #[test]
    fn instantiate_matches_direct_evaluation() {
        let f = exists(and(
            eq(add(var(0), var(1)), var(2)),
            le(var(1), var(2)),
        ));
        let args = [add(var(0), nat(1u32)), mul(var(1), var(1))];
        let g = f.instantiate(&args);
        assert!(g.well_scoped(2));
        for p0 in 0..5u64 {
            for p1 in 0..5u64 {
                let direct = f.eval_bounded(&vals(&[p0 + 1, p1 * p1]), &b(30));
                assert_eq!(
                    g.eval_bounded(&vals(&[p0, p1]), &b(30)),
                    direct,
                    "p0={} p1={}",
                    p0,
                    p1
                );
            }
        }
    }

    #[test]
    fn instantiate_shifts_args_under_binders() {
        let f = exists(eq(var(1), mul(var(0), var(0))));
        let g = f.instantiate(&[var(3)]);
        assert_eq!(g, exists(eq(var(4), mul(var(0), var(0)))));
    }

    #[test]
    fn four_squares_examples() {
        assert_eq!(four_squares(0), (0, 0, 0, 0));
        assert_eq!(four_squares(4), (0, 0, 0, 2));
        assert_eq!(four_squares(7), (1, 1, 1, 2));
    }

    #[test]
    fn four_squares_sums_and_sortedness() {
        for n in 0..=2000u64 {
            let (x, y, z, w) = four_squares(n);
            assert_eq!(x * x + y * y + z * z + w * w, n, "n = {}", n);
            assert!(x <= y && y <= z && z <= w, "n = {}", n);
        }
    }

    #[test]
    fn four_squares_is_lexicographically_first() {
        for n in 0..=60u64 {
            let mut best = None;
            let r = n.isqrt();
            for x in 0..=r {
                for y in 0..=r {
                    for z in 0..=r {
                        for w in 0..=r {
                            if x * x + y * y + z * z + w * w == n {
                                let cand = (x, y, z, w);
                                if best.map_or(true, |b| cand < b) {
                                    best = Some(cand);
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(four_squares(n), best.unwrap(), "n = {}", n);
        }
    }
}
