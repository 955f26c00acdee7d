//! Exact construction and verification of degenerate Bell polynomials and
//! degenerate Stirling numbers of the second kind.
//!
//! All exact values live in [`MPoly`], sparse polynomials over the rationals
//! in `λ`, a formal symbol `L = log(1+λ)/λ`, and the indeterminates `x`, `y`.

pub mod bell;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod series;
pub mod sum;

pub use error::Error;
pub use poly::{Bindings, MPoly, Monomial, Point, Var};
pub use rational::Rational;
pub use series::Series;
