//! Solution sequences of the Pell equation `x^2 - d*y^2 = 1` for `d = a^2 - 1`.
//!
//! For any `a > 1` the radicand `d = a^2 - 1` is never a perfect square, the
//! fundamental solution is `(x_1, y_1) = (a, 1)`, and every natural solution
//! is a power of it: `x_n + y_n*sqrt(d) = (a + sqrt(d))^n`. The sequences
//! satisfy the mutual recurrence
//!
//! ```text
//! x_0 = 1   x_{n+1} = x_n * a + d * y_n
//! y_0 = 0   y_{n+1} = x_n + y_n * a
//! ```
//!
//! [`PellBase::enumerate_solutions`] deliberately shares no code with the
//! recurrence: it scans `x` directly and tests `(x^2 - 1) / d` for being a
//! perfect square, so the two routes check each other.

use crate::zsqrtd::QuadInt;
use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::{Arc, RwLock};
use thiserror::Error;

/// Largest index served straight from the memoized recurrence; bigger
/// indices switch to the doubling ladder and skip the memo.
const MEMO_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("Pell base requires a >= 2, got a = {a}")]
pub struct InvalidPellBase {
    a: BigUint,
}

/// A Pell equation `x^2 - d*y^2 = 1` with `d = a^2 - 1` for a fixed `a > 1`.
///
/// Cloning is cheap and shares the memoized solution prefix; the memo is
/// guarded so concurrent readers observe a consistent sequence.
#[derive(Clone)]
pub struct PellBase {
    a: BigUint,
    d: BigUint,
    memo: Arc<RwLock<Vec<(BigUint, BigUint)>>>,
}

/// The `n`-th solution `(x_n, y_n)` of the Pell equation for `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellPair {
    pub base: PellBase,
    pub n: u64,
    pub x: BigUint,
    pub y: BigUint,
}

impl PartialEq for PellBase {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for PellBase {}

impl fmt::Debug for PellBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PellBase").field("a", &self.a).field("d", &self.d).finish()
    }
}

impl PellBase {
    pub fn new(a: impl Into<BigUint>) -> Result<PellBase, InvalidPellBase> {
        let a = a.into();
        if a < BigUint::from(2u32) {
            return Err(InvalidPellBase { a });
        }
        let d = &a * &a - 1u32;
        Ok(PellBase { a, d, memo: Arc::new(RwLock::new(vec![(BigUint::one(), BigUint::zero())])) })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    /// The radicand `d = a^2 - 1`.
    pub fn d(&self) -> &BigUint {
        &self.d
    }

    /// `(x_{n+1}, y_{n+1})` from `(x_n, y_n)`.
    pub(crate) fn step(&self, x: &BigUint, y: &BigUint) -> (BigUint, BigUint) {
        (x * &self.a + &self.d * y, x + y * &self.a)
    }

    fn pair_by_recurrence(&self, n: u64) -> (BigUint, BigUint) {
        let n = usize::try_from(n).expect("recurrence index fits usize");
        {
            let memo = self.memo.read().unwrap();
            if let Some(pair) = memo.get(n) {
                return pair.clone();
            }
        }
        let mut memo = self.memo.write().unwrap();
        while memo.len() <= n {
            let (x, y) = memo.last().unwrap();
            let next = self.step(x, y);
            memo.push(next);
        }
        memo[n].clone()
    }

    /// Most-significant-bit-first ladder on `z_{2n} = z_n^2`, which in
    /// coordinates is `x_{2n} = 2*x_n^2 - 1`, `y_{2n} = 2*x_n*y_n`.
    fn pair_by_doubling(&self, n: u64) -> (BigUint, BigUint) {
        let mut x = BigUint::one();
        let mut y = BigUint::zero();
        for i in (0..u64::BITS - n.leading_zeros()).rev() {
            let x2 = BigUint::from(2u32) * &x * &x - 1u32;
            let y2 = BigUint::from(2u32) * &x * &y;
            if (n >> i) & 1 == 1 {
                let (xs, ys) = self.step(&x2, &y2);
                x = xs;
                y = ys;
            } else {
                x = x2;
                y = y2;
            }
        }
        (x, y)
    }

    fn pair_values(&self, n: u64) -> (BigUint, BigUint) {
        if n <= MEMO_LIMIT {
            self.pair_by_recurrence(n)
        } else {
            self.pair_by_doubling(n)
        }
    }

    /// The `n`-th solution `(x_n, y_n)`, exactly.
    pub fn pell_pair(&self, n: u64) -> PellPair {
        let (x, y) = self.pair_values(n);
        PellPair { base: self.clone(), n, x, y }
    }

    /// Whether `x^2 - d*y^2 = 1`, evaluated exactly.
    pub fn is_pell_solution(&self, x: &BigUint, y: &BigUint) -> bool {
        x * x == &self.d * y * y + 1u32
    }

    /// The ring element `z_n = x_n + y_n*sqrt(d)`; equals `pow(z_1, n)`.
    pub fn zn_embed(&self, n: u64) -> QuadInt {
        let (x, y) = self.pair_values(n);
        QuadInt::new(self.d.clone(), BigInt::from(x), BigInt::from(y))
    }

    /// All solutions with `1 <= x <= x_bound`, ascending in `x`, found by
    /// direct scan: `y^2 = (x^2 - 1) / d` must divide exactly and be a
    /// perfect square. Independent of the recurrence by construction.
    pub fn enumerate_solutions(&self, x_bound: &BigUint) -> Vec<(BigUint, BigUint)> {
        if let (Ok(bound), Ok(d)) = (u64::try_from(x_bound), u64::try_from(&self.d)) {
            return self.enumerate_small(bound, d);
        }
        let mut out = Vec::new();
        let mut x = BigUint::one();
        while &x <= x_bound {
            let t = &x * &x - 1u32;
            if (&t % &self.d).is_zero() {
                let q = t / &self.d;
                let y = q.sqrt();
                if &y * &y == q {
                    out.push((x.clone(), y));
                }
            }
            x += 1u32;
        }
        out
    }

    fn enumerate_small(&self, x_bound: u64, d: u64) -> Vec<(BigUint, BigUint)> {
        let d = d as u128;
        let mut out = Vec::new();
        for x in 1..=x_bound {
            let t = (x as u128) * (x as u128) - 1;
            if t % d == 0 {
                let q = t / d;
                let y = q.sqrt();
                if y * y == q {
                    out.push((BigUint::from(x), BigUint::from(y)));
                }
            }
        }
        out
    }

    /// The index `n` with `(x, y) = (x_n, y_n)`, if any. Generates pairs
    /// until `x_n >= x`, so it terminates without assuming the enumeration
    /// theorem it is used to test.
    pub fn solution_index(&self, x: &BigUint, y: &BigUint) -> Option<u64> {
        if !self.is_pell_solution(x, y) {
            return None;
        }
        let mut n = 0u64;
        loop {
            let (xn, yn) = self.pair_values(n);
            if &xn == x {
                return (&yn == y).then_some(n);
            }
            if &xn > x {
                return None;
            }
            n += 1;
        }
    }
}
