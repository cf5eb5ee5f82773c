//! Textual syntax for formulas and terms, in s-expression style.
//!
//! Grammar (`f` formula, `t` term, `N` natural, `vN` variable):
//!
//! ```text
//! f ::= (= t t) | (<= t t) | (< t t) | (!= t t) | (dvd t t) | (mod= t t t)
//!     | (and f f ...) | (or f f ...) | (exists f)
//! t ::= N | vN | (+ t t ...) | (* t t ...)
//! ```
//!
//! `and`, `or`, `+` and `*` accept two or more operands and left-fold onto
//! the binary constructors; `;` starts a comment running to end of line.
//! `Display` prints the canonical fully-binary single-line form, and parsing
//! that form returns the original formula. [`pretty`] is a multi-line
//! renderer for human review that flattens `and`/`or` chains; its output
//! parses back to the same formula.
//!
//! Variable scope is checked during parsing against a declared parameter
//! count: under `b` binders, only `v0` through `v{params+b-1}` are legal.

use super::{Formula, Term};
use num_bigint::BigUint;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{}", c),
            Term::Var(i) => write!(f, "v{}", i),
            Term::Add(a, b) => write!(f, "(+ {} {})", a, b),
            Term::Mul(a, b) => write!(f, "(* {} {})", a, b),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {} {})", a, b),
            Formula::Le(a, b) => write!(f, "(<= {} {})", a, b),
            Formula::Lt(a, b) => write!(f, "(< {} {})", a, b),
            Formula::Ne(a, b) => write!(f, "(!= {} {})", a, b),
            Formula::Dvd(a, b) => write!(f, "(dvd {} {})", a, b),
            Formula::ModCong(a, b, m) => write!(f, "(mod= {} {} {})", a, b, m),
            Formula::And(p, q) => write!(f, "(and {} {})", p, q),
            Formula::Or(p, q) => write!(f, "(or {} {})", p, q),
            Formula::Exists(p) => write!(f, "(exists {})", p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(src: &str) -> Vec<(usize, Tok<'_>)> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                toks.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::Close));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && bytes[i] != b'('
                    && bytes[i] != b')'
                    && bytes[i] != b';'
                {
                    i += 1;
                }
                toks.push((start, Tok::Atom(&src[start..i])));
            }
        }
    }
    toks
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    cur: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(usize, Tok<'a>)> {
        self.toks.get(self.cur).copied()
    }

    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let t = self.peek();
        if t.is_some() {
            self.cur += 1;
        }
        t
    }

    fn expect_close(&mut self, opened_at: usize) -> Result<(), ParseError> {
        match self.next() {
            Some((_, Tok::Close)) => Ok(()),
            Some((pos, _)) => err(pos, "expected ')'"),
            None => err(self.end, format!("missing ')' for '(' at byte {}", opened_at)),
        }
    }

    fn at_close(&self) -> bool {
        matches!(self.peek(), Some((_, Tok::Close)) | None)
    }

    fn term(&mut self, limit: usize) -> Result<Term, ParseError> {
        match self.next() {
            None => err(self.end, "expected a term"),
            Some((pos, Tok::Close)) => err(pos, "expected a term, found ')'"),
            Some((pos, Tok::Atom(a))) => self.atom_term(pos, a, limit),
            Some((open, Tok::Open)) => {
                let (pos, head) = match self.next() {
                    Some((pos, Tok::Atom(a))) => (pos, a),
                    Some((pos, _)) => return err(pos, "expected '+' or '*'"),
                    None => return err(self.end, "unterminated term"),
                };
                let fold: fn(Term, Term) -> Term = match head {
                    "+" => |a, b| Term::Add(Box::new(a), Box::new(b)),
                    "*" => |a, b| Term::Mul(Box::new(a), Box::new(b)),
                    other => return err(pos, format!("unknown term operator {:?}", other)),
                };
                let mut acc = self.term(limit)?;
                let second = self.term(limit)?;
                acc = fold(acc, second);
                while !self.at_close() {
                    let next = self.term(limit)?;
                    acc = fold(acc, next);
                }
                self.expect_close(open)?;
                Ok(acc)
            }
        }
    }

    fn atom_term(&mut self, pos: usize, a: &str, limit: usize) -> Result<Term, ParseError> {
        if let Some(rest) = a.strip_prefix('v') {
            let i: usize = match rest.parse() {
                Ok(i) => i,
                Err(_) => return err(pos, format!("bad variable {:?}", a)),
            };
            if i >= limit {
                return err(
                    pos,
                    format!("variable v{} out of scope; only v0..v{} are bound here", i, limit.saturating_sub(1)),
                );
            }
            return Ok(Term::Var(i));
        }
        match a.parse::<BigUint>() {
            Ok(n) => Ok(Term::Const(n)),
            Err(_) => err(pos, format!("expected a natural number or variable, found {:?}", a)),
        }
    }

    fn formula(&mut self, depth_limit: usize) -> Result<Formula, ParseError> {
        let open = match self.next() {
            Some((pos, Tok::Open)) => pos,
            Some((pos, _)) => return err(pos, "expected '(' starting a formula"),
            None => return err(self.end, "expected a formula"),
        };
        let (pos, head) = match self.next() {
            Some((pos, Tok::Atom(a))) => (pos, a),
            Some((pos, _)) => return err(pos, "expected a formula operator"),
            None => return err(self.end, "unterminated formula"),
        };
        let f = match head {
            "=" | "<=" | "<" | "!=" | "dvd" => {
                let a = self.term(depth_limit)?;
                let b = self.term(depth_limit)?;
                match head {
                    "=" => Formula::Eq(a, b),
                    "<=" => Formula::Le(a, b),
                    "<" => Formula::Lt(a, b),
                    "!=" => Formula::Ne(a, b),
                    _ => Formula::Dvd(a, b),
                }
            }
            "mod=" => {
                let a = self.term(depth_limit)?;
                let b = self.term(depth_limit)?;
                let m = self.term(depth_limit)?;
                Formula::ModCong(a, b, m)
            }
            "and" | "or" => {
                let fold: fn(Formula, Formula) -> Formula = if head == "and" {
                    |a, b| Formula::And(Box::new(a), Box::new(b))
                } else {
                    |a, b| Formula::Or(Box::new(a), Box::new(b))
                };
                let mut acc = self.formula(depth_limit)?;
                let second = self.formula(depth_limit)?;
                acc = fold(acc, second);
                while !self.at_close() {
                    let next = self.formula(depth_limit)?;
                    acc = fold(acc, next);
                }
                acc
            }
            "exists" => Formula::Exists(Box::new(self.formula(depth_limit + 1)?)),
            other => return err(pos, format!("unknown formula operator {:?}", other)),
        };
        self.expect_close(open)?;
        Ok(f)
    }
}

/// Parses a formula over `params` free parameters, checking variable scope
/// as it goes.
pub fn parse_formula(src: &str, params: usize) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(src), cur: 0, end: src.len() };
    let f = p.formula(params)?;
    match p.peek() {
        None => Ok(f),
        Some((pos, _)) => err(pos, "unexpected trailing input after formula"),
    }
}

/// Multi-line rendering with `and`/`or` chains flattened, for golden files
/// and human review. Parses back to the same formula.
pub fn pretty(f: &Formula) -> String {
    let mut out = String::new();
    pretty_rec(f, 0, &mut out);
    out.push('\n');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn flatten<'f>(f: &'f Formula, op: fn(&Formula) -> Option<(&Formula, &Formula)>, out: &mut Vec<&'f Formula>) {
    match op(f) {
        Some((l, r)) => {
            flatten(l, op, out);
            out.push(r);
        }
        None => out.push(f),
    }
}

fn pretty_rec(f: &Formula, level: usize, out: &mut String) {
    indent(out, level);
    match f {
        Formula::And(..) | Formula::Or(..) => {
            let (name, proj): (&str, fn(&Formula) -> Option<(&Formula, &Formula)>) = match f {
                Formula::And(..) => ("and", |g| match g {
                    Formula::And(a, b) => Some((a, b)),
                    _ => None,
                }),
                _ => ("or", |g| match g {
                    Formula::Or(a, b) => Some((a, b)),
                    _ => None,
                }),
            };
            let mut parts = Vec::new();
            flatten(f, proj, &mut parts);
            out.push('(');
            out.push_str(name);
            for part in parts {
                out.push('\n');
                pretty_rec(part, level + 1, out);
            }
            out.push(')');
        }
        Formula::Exists(body) => {
            out.push_str("(exists\n");
            pretty_rec(body, level + 1, out);
            out.push(')');
        }
        atom => {
            out.push_str(&atom.to_string());
        }
    }
}
