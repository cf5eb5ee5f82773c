//! Deterministic formula corpus for cross-validation tests.
//!
//! The compiler and the bounded evaluator are two independent readings of
//! the same language, and the test suite plays them against each other over
//! this corpus. Entries come from a seeded ChaCha8 stream so every checkout
//! tests the same formulas; a digest test pins the exact contents.

use super::{
    add, and, dvd, eq, exists, le, lt, mod_cong, mul, nat, ne, or, var, Formula, Term,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x6d61_7469_7961_7365;

/// How many pseudo-random entries [`corpus`] generates, on top of the
/// handwritten edge cases.
pub const GENERATED_COUNT: usize = 200;

/// Hard ceilings obeyed by every corpus entry.
pub const MAX_DEPTH: usize = 4;
pub const MAX_PARAMS: usize = 3;
pub const MAX_EXISTS: usize = 3;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub formula: Formula,
    pub params: usize,
}

/// Handwritten degenerate and documentation cases, then the generated bulk.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = handwritten();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for _ in 0..GENERATED_COUNT {
        out.push(gen_entry(&mut rng));
    }
    out
}

fn handwritten() -> Vec<CorpusEntry> {
    let e = |formula: Formula, params: usize| CorpusEntry { formula, params };
    vec![
        e(eq(var(0), var(0)), 1),
        e(ne(var(0), var(0)), 1),
        e(dvd(nat(0u32), var(0)), 1),
        e(dvd(var(0), nat(0u32)), 1),
        e(mod_cong(var(0), var(1), nat(0u32)), 2),
        e(mod_cong(var(0), nat(1u32), mul(nat(4u32), var(1))), 2),
        e(and(eq(var(0), nat(1u32)), eq(var(1), nat(0u32))), 2),
        e(dvd(var(0), var(1)), 2),
        e(exists(eq(add(var(0), var(1)), nat(5u32))), 1),
        e(exists(eq(var(0), nat(5u32))), 0),
        e(and(eq(add(var(0), nat(1u32)), var(1)), exists(dvd(var(0), var(1)))), 2),
        e(exists(exists(eq(add(var(0), var(1)), var(2)))), 1),
        e(or(lt(var(0), var(1)), lt(var(1), var(0))), 2),
        e(le(mul(var(0), var(0)), mul(var(1), var(1))), 2),
        e(exists(and(eq(mul(var(0), var(0)), var(1)), le(var(0), var(1)))), 1),
        e(or(eq(var(0), nat(2u32)), or(eq(var(0), nat(3u32)), eq(var(0), nat(5u32)))), 1),
    ]
}

fn below(rng: &mut ChaCha8Rng, n: u32) -> u32 {
    rng.next_u32() % n
}

fn gen_entry(rng: &mut ChaCha8Rng) -> CorpusEntry {
    let params = 1 + below(rng, MAX_PARAMS as u32) as usize;
    let depth = 1 + below(rng, MAX_DEPTH as u32) as usize;
    let mut exists_left = match below(rng, 10) {
        0..=4 => 1usize,
        5..=7 => 2,
        _ => MAX_EXISTS,
    };
    let formula = gen_formula(rng, depth, params, &mut exists_left);
    debug_assert!(formula.well_scoped(params));
    CorpusEntry { formula, params }
}

fn gen_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    scope: usize,
    exists_left: &mut usize,
) -> Formula {
    if depth == 0 {
        return gen_atom(rng, scope);
    }
    match below(rng, 10) {
        0..=3 => gen_atom(rng, scope),
        4 | 5 => and(
            gen_formula(rng, depth - 1, scope, exists_left),
            gen_formula(rng, depth - 1, scope, exists_left),
        ),
        6 | 7 => or(
            gen_formula(rng, depth - 1, scope, exists_left),
            gen_formula(rng, depth - 1, scope, exists_left),
        ),
        _ => {
            if *exists_left == 0 {
                gen_atom(rng, scope)
            } else {
                *exists_left -= 1;
                exists(gen_formula(rng, depth - 1, scope + 1, exists_left))
            }
        }
    }
}

fn gen_atom(rng: &mut ChaCha8Rng, scope: usize) -> Formula {
    let t1 = gen_term(rng, 2, scope);
    let t2 = gen_term(rng, 2, scope);
    match below(rng, 6) {
        0 => eq(t1, t2),
        1 => le(t1, t2),
        2 => lt(t1, t2),
        3 => ne(t1, t2),
        4 => dvd(t1, t2),
        _ => mod_cong(t1, t2, gen_term(rng, 1, scope)),
    }
}

fn gen_term(rng: &mut ChaCha8Rng, depth: usize, scope: usize) -> Term {
    let leaf = depth == 0 || below(rng, 10) < 5;
    if leaf {
        if scope > 0 && below(rng, 10) < 6 {
            var(below(rng, scope as u32) as usize)
        } else {
            nat(below(rng, 9))
        }
    } else if below(rng, 2) == 0 {
        add(gen_term(rng, depth - 1, scope), gen_term(rng, depth - 1, scope))
    } else {
        mul(gen_term(rng, depth - 1, scope), gen_term(rng, depth - 1, scope))
    }
}
