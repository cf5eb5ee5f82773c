//! Exact multivariate integer polynomials over indexed variables.
//!
//! A [`Poly`] is kept in canonical form: monomials are stored under their
//! exponent vectors (dense, length `num_vars`), no exponent vector appears
//! twice and no coefficient is zero. Structural equality of canonical forms
//! therefore coincides with semantic equality. Monomials serialize in
//! lexicographic exponent order, which the `BTreeMap` gives for free, so the
//! JSON form is deterministic.
//!
//! Variables are addressed by index `0..num_vars`. Compiled formulas place
//! parameters first and dummy variables after them; [`Poly::remap`] is what
//! merges those blocks when polynomials over different variable sets are
//! combined.

use num_bigint::BigInt;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: polynomial over {expected} variables applied to {got}")]
    Arity { expected: usize, got: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    VarIndex { index: usize, num_vars: usize },
    #[error("remap is not injective: indices {first} and {second} both map to {target}")]
    NotInjective { first: usize, second: usize, target: usize },
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// A multivariate polynomial with arbitrary-precision integer coefficients,
/// in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Poly {
        Poly { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<BigInt>, num_vars: usize) -> Poly {
        let mut p = Poly::zero(num_vars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The monomial `x_i`. Panics when `i >= num_vars`.
    pub fn var(i: usize, num_vars: usize) -> Poly {
        assert!(i < num_vars, "variable index {} out of range for {} variables", i, num_vars);
        let mut exps = vec![0u32; num_vars];
        exps[i] = 1;
        let mut p = Poly::zero(num_vars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    /// Builds a canonical polynomial from raw monomials, summing duplicate
    /// exponent vectors and dropping zero coefficients.
    pub fn from_monomials(
        num_vars: usize,
        monomials: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Poly, PolyError> {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, coef) in monomials {
            if exps.len() != num_vars {
                return Err(PolyError::Arity { expected: num_vars, got: exps.len() });
            }
            let entry = terms.entry(exps).or_insert_with(BigInt::zero);
            *entry += coef;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Poly { num_vars, terms })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials in lexicographic exponent order.
    pub fn monomials(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.len()
    }

    /// Total degree: the largest exponent sum, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn require_same_arity(&self, other: &Poly) {
        assert_eq!(
            self.num_vars, other.num_vars,
            "arity mismatch: {} vs {} variables",
            self.num_vars, other.num_vars
        );
    }

    pub fn p_add(&self, other: &Poly) -> Poly {
        self.require_same_arity(other);
        let mut terms = self.terms.clone();
        for (exps, coef) in &other.terms {
            let entry = terms.entry(exps.clone()).or_insert_with(BigInt::zero);
            *entry += coef;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { num_vars: self.num_vars, terms }
    }

    pub fn p_neg(&self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn p_sub(&self, other: &Poly) -> Poly {
        self.p_add(&other.p_neg())
    }

    pub fn p_mul(&self, other: &Poly) -> Poly {
        self.require_same_arity(other);
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(exps).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { num_vars: self.num_vars, terms }
    }

    /// Exact value at a point of naturals.
    pub fn eval(&self, point: &[BigUint]) -> Result<BigInt, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::Arity { expected: self.num_vars, got: point.len() });
        }
        let mut total = BigInt::zero();
        for (exps, coef) in &self.terms {
            let mut m = coef.clone();
            for (v, &e) in point.iter().zip(exps) {
                if e > 0 {
                    m *= BigInt::from(v.pow(e));
                }
            }
            total += m;
        }
        Ok(total)
    }

    /// Renames variable `i` to `map[i]` inside a space of `new_num_vars`
    /// variables. `map` must be injective and in range; evaluation satisfies
    /// `remap(p).eval(v) = p.eval(i -> v[map[i]])`.
    pub fn remap(&self, map: &[usize], new_num_vars: usize) -> Result<Poly, PolyError> {
        if map.len() != self.num_vars {
            return Err(PolyError::Arity { expected: self.num_vars, got: map.len() });
        }
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &target) in map.iter().enumerate() {
            if target >= new_num_vars {
                return Err(PolyError::VarIndex { index: target, num_vars: new_num_vars });
            }
            if let Some(&first) = seen.get(&target) {
                return Err(PolyError::NotInjective { first, second: i, target });
            }
            seen.insert(target, i);
        }
        let terms = self
            .terms
            .iter()
            .map(|(exps, coef)| {
                let mut e = vec![0u32; new_num_vars];
                for (i, &x) in exps.iter().enumerate() {
                    e[map[i]] = x;
                }
                (e, coef.clone())
            })
            .collect();
        Ok(Poly { num_vars: new_num_vars, terms })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyRepr::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Poly, PolyError> {
        let repr: PolyRepr = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        repr.try_into()
    }
}

/// Serialized form: coefficients as decimal strings, monomials in
/// lexicographic exponent order.
#[derive(Serialize, Deserialize)]
pub(crate) struct PolyRepr {
    pub num_vars: usize,
    pub monomials: Vec<MonomialRepr>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MonomialRepr {
    pub coef: String,
    pub exps: Vec<u32>,
}

impl From<&Poly> for PolyRepr {
    fn from(p: &Poly) -> PolyRepr {
        PolyRepr {
            num_vars: p.num_vars,
            monomials: p
                .terms
                .iter()
                .map(|(e, c)| MonomialRepr { coef: c.to_string(), exps: e.clone() })
                .collect(),
        }
    }
}

impl TryFrom<PolyRepr> for Poly {
    type Error = PolyError;

    fn try_from(repr: PolyRepr) -> Result<Poly, PolyError> {
        let mut terms = BTreeMap::new();
        for m in repr.monomials {
            if m.exps.len() != repr.num_vars {
                return Err(PolyError::Json(format!(
                    "exponent vector of length {} in a polynomial over {} variables",
                    m.exps.len(),
                    repr.num_vars
                )));
            }
            let coef = BigInt::from_str(&m.coef)
                .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", m.coef)))?;
            if coef.is_zero() {
                return Err(PolyError::Json("zero coefficient in monomial list".into()));
            }
            if terms.insert(m.exps, coef).is_some() {
                return Err(PolyError::Json("duplicate exponent vector".into()));
            }
        }
        Ok(Poly { num_vars: repr.num_vars, terms })
    }
}
