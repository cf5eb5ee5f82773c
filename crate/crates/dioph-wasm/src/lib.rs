//! Browser bindings: a thin string-in, string-out facade over the core
//! crate. Every function returns a JSON object as a string; failures come
//! back as `{"error": "..."}` instead of thrown exceptions so the page can
//! render both outcomes the same way.
//!
//! Build with `wasm-pack build --target web`; the demo page under `www/`
//! loads the generated module directly.

use dioph::formula::sexp::parse_formula;
use dioph::formula::{compile, CompiledDioph, MembershipOutcome};
use dioph::pell::PellBase;
use num_bigint::BigUint;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

/// Evaluation budget for [`check_formula`]; browsers get no cap flag.
const SCAN_CAP: u64 = 2_000_000;

fn err(msg: impl Into<String>) -> String {
    json!({ "error": msg.into() }).to_string()
}

/// The solution pair `x_n(a), y_n(a)` for a decimal base, as
/// `{"x": "...", "y": "..."}`.
#[wasm_bindgen]
pub fn pell_pair(a: &str, n: u32) -> String {
    let Ok(a) = a.trim().parse::<BigUint>() else {
        return err("the base must be a decimal natural");
    };
    match PellBase::new(a) {
        Ok(base) => {
            let p = base.pell_pair(u64::from(n));
            json!({ "x": p.x.to_string(), "y": p.y.to_string() }).to_string()
        }
        Err(e) => err(e.to_string()),
    }
}

/// Compiles a formula in the s-expression syntax to its polynomial:
/// `{"poly": {...}, "dummies": n, "monomials": m}`.
#[wasm_bindgen]
pub fn compile_formula(src: &str, params: usize) -> String {
    let f = match parse_formula(src, params) {
        Ok(f) => f,
        Err(e) => return err(format!("parse error at byte {}: {}", e.pos, e.msg)),
    };
    match compile(&f, params) {
        Ok(c) => {
            let poly: serde_json::Value =
                serde_json::from_str(&c.to_json()).expect("canonical polynomial JSON");
            let monomials = poly["monomials"].as_array().map_or(0, Vec::len);
            json!({ "poly": poly, "dummies": c.dummies(), "monomials": monomials }).to_string()
        }
        Err(e) => err(e.to_string()),
    }
}

/// Bounded witness search at given parameter values (decimal, separated by
/// commas or spaces). Accepts a formula or a compiled polynomial JSON.
/// Returns `{"witness": [...]}`, `{"witness": null}` when the box is empty,
/// or `{"cap_hit": "..."}` when the budget runs out first.
#[wasm_bindgen]
pub fn check_formula(src: &str, params: &str, bound: &str) -> String {
    let mut values = Vec::new();
    for tok in params.split([',', ' ']).filter(|t| !t.is_empty()) {
        match tok.parse::<BigUint>() {
            Ok(v) => values.push(v),
            Err(_) => return err(format!("parameter {tok:?} is not a decimal natural")),
        }
    }
    let Ok(bound) = bound.trim().parse::<BigUint>() else {
        return err("the bound must be a decimal natural");
    };
    let compiled = if src.trim_start().starts_with('{') {
        CompiledDioph::from_json(src)
    } else {
        match parse_formula(src, values.len()) {
            Ok(f) => compile(&f, values.len()),
            Err(e) => return err(format!("parse error at byte {}: {}", e.pos, e.msg)),
        }
    };
    let compiled = match compiled {
        Ok(c) => c,
        Err(e) => return err(e.to_string()),
    };
    if compiled.params() != values.len() {
        return err(format!(
            "the polynomial takes {} parameters, {} given",
            compiled.params(),
            values.len()
        ));
    }
    match compiled.membership_capped(&values, &bound, SCAN_CAP) {
        MembershipOutcome::Found(w) => {
            let arr: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            json!({ "witness": arr }).to_string()
        }
        MembershipOutcome::Exhausted => {
            json!({ "witness": null, "bound": bound.to_string() }).to_string()
        }
        MembershipOutcome::CapHit { evaluated } => {
            json!({ "cap_hit": evaluated.to_string() }).to_string()
        }
    }
}
