//! Exact arithmetic for Pell equations and Diophantine representability.
//!
//! The crate is organised as a tower:
//!
//! * [`zsqrtd`] implements the quadratic integer ring `Z[sqrt(d)]` with exact
//!   comparison against zero, the primitive everything else sits on.
//! * [`pell`] generates the solution sequence of the Pell equation
//!   `x^2 - d*y^2 = 1` for `d = a^2 - 1`, both by recurrence and by an
//!   independent brute-force enumeration used to cross-check it.
//! * [`poly`] is a small multivariate integer polynomial type with exact
//!   evaluation and a canonical JSON form.
//! * [`formula`] defines a first-order language of Diophantine formulas over
//!   the naturals (equality, order, divisibility, congruence, conjunction,
//!   disjunction, bounded existentials) together with a compiler that turns
//!   any formula into a single polynomial whose zero set over the naturals
//!   is exactly the set defined by the formula.
//! * [`matiyasevich`] builds the two classical constructions on top of the
//!   language: the purely existential definition of the Pell solution
//!   sequence, and from it the definition of the graph of exponentiation,
//!   with searchable and independently checkable witnesses.
//!
//! The binary target `dioph` exposes the same functionality as a command
//! line tool; see the crate README for the interface.

pub mod formula;
pub mod matiyasevich;
pub mod pell;
pub mod poly;
pub mod zsqrtd;

pub use pell::PellBase;
pub use poly::Poly;
pub use zsqrtd::QuadInt;
