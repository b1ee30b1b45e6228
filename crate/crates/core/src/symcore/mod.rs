//! Exact scalars and truncated graded symbols.
//!
//! Everything here is exact: scalars are Gaussian rationals and symbols are
//! finite sums of monomials that are polynomial in `x` and in `ξ₂..ξₙ` and
//! Laurent (with rational exponents) in the distinguished covariable `ξ₁`.

pub mod json;
pub mod linalg;
pub mod scalar;
pub mod symbol;

pub use json::{parse_json, symbol_from_json, symbol_to_json, SymbolJson};
pub use scalar::{format_rational, frac, int, parse_rational, rat, ExactScalar, Rational};
pub use symbol::{GradedSymbol, Monomial, MonomialKey};
