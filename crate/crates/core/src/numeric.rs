//! Floating-point evaluation of the closed forms and truncated checks of the
//! infinite-series (Dobiński-type) identities.
//!
//! `λ = 0` is never passed to a degenerate path: `L = log(1+λ)/λ` has a
//! removable singularity there, and callers use the classical formulas.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bell::{bell_degenerate_stirling, bell_double_sum};
use crate::combinatorics::{bell_polynomial, StirlingKind, StirlingTable};
use crate::error::Error;
use crate::poly::{Bindings, MPoly, Monomial, Point, Var};
use crate::rational::Rational;
use crate::sum::CompensatedSum;

pub const DEFAULT_TERMS: usize = 80;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Grid used by [`numeric_suite`].
pub const GRID_LAMBDAS: [f64; 3] = [0.1, 0.5, 1.0];
pub const GRID_XS: [f64; 3] = [0.5, 1.0, 2.0];
/// Largest `n` on the numeric grid. Beyond it the values outgrow what an
/// absolute tolerance of `1e-9` can resolve in double precision.
pub const GRID_N_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericParams {
    pub n: usize,
    pub lambda: Option<f64>,
    pub x: f64,
    pub terms: Option<usize>,
}

/// A floating-point comparison. `passed` is `abs_error <= tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub identity: String,
    pub params: NumericParams,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    pub tol: f64,
    pub passed: bool,
}

impl NumericCheck {
    pub fn new(identity: &str, params: NumericParams, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_error = (lhs - rhs).abs();
        NumericCheck {
            identity: identity.to_string(),
            params,
            lhs,
            rhs,
            abs_error,
            tol,
            // NaN never passes
            passed: abs_error <= tol,
        }
    }

    pub const CSV_HEADER: &'static str = "identity,n,lambda,x,terms,lhs,rhs,abs_error,passed";

    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<String>| v.unwrap_or_default();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            self.identity,
            self.params.n,
            opt(self.params.lambda.map(|l| l.to_string())),
            self.params.x,
            opt(self.params.terms.map(|t| t.to_string())),
            self.lhs,
            self.rhs,
            self.abs_error,
            self.passed
        )
        .expect("writing to a String");
        s
    }
}

pub fn validate_lambda(lambda: f64) -> Result<(), Error> {
    if !lambda.is_finite() || lambda <= -1.0 || lambda == 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

/// `log(1+λ)/λ`
pub fn l_value(lambda: f64) -> Result<f64, Error> {
    validate_lambda(lambda)?;
    Ok(lambda.ln_1p() / lambda)
}

fn exact(v: f64) -> Result<Rational, Error> {
    Rational::from_f64(v).ok_or_else(|| Error::InvalidArgument(format!("{v} is not finite")))
}

/// Evaluates `p` at the given `λ` and `x` (and `y = 0`).
///
/// Both doubles are exact dyadic rationals, so they are substituted exactly;
/// only the remaining polynomial in `L` is evaluated in floating point, by
/// Horner's rule at `L = log(1+λ)/λ`.
pub fn eval_at(p: &MPoly, lambda: f64, x: f64) -> Result<f64, Error> {
    let l = l_value(lambda)?;
    let bindings = Bindings::new()
        .bind(Var::Lambda, MPoly::constant(exact(lambda)?))
        .bind(Var::X, MPoly::constant(exact(x)?))
        .bind(Var::Y, MPoly::zero());
    let in_l = p.substitute(&bindings);
    let degree = in_l.degree_in(Var::L).unwrap_or(0);
    let mut acc = 0.0;
    for e in (0..=degree).rev() {
        acc = acc * l + in_l.coeff(&Monomial::new(0, e, 0, 0)).to_f64();
    }
    Ok(acc)
}

/// `Bel_{n,λ}(x)` from the degenerate Stirling closed form.
pub fn eval_bel_numeric(n: usize, lambda: f64, x: f64) -> Result<f64, Error> {
    eval_at(&bell_degenerate_stirling(n), lambda, x)
}

/// `(z|λ)_n` in floating point.
fn falling_factorial(z: f64, lambda: f64, n: usize) -> f64 {
    (0..n).map(|i| z - i as f64 * lambda).product()
}

/// `e^{-xL} Σ_{l=0}^{terms} (xL)^l / l! · (l|λ)_n`
pub fn dobinski_degenerate(n: usize, lambda: f64, x: f64, terms: usize) -> Result<f64, Error> {
    let l = l_value(lambda)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("terms must be at least 1".into()));
    }
    let xl = x * l;
    let mut weight = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 0..=terms {
        if k > 0 {
            weight *= xl / k as f64;
        }
        acc.add(weight * falling_factorial(k as f64, lambda, n));
    }
    Ok((-xl).exp() * acc.value())
}

/// `e^{-1} Σ_{k=0}^{terms} k^n / k!`
pub fn dobinski_classical(n: usize, terms: usize) -> f64 {
    let mut weight = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 0..=terms {
        if k > 0 {
            weight /= k as f64;
        }
        acc.add(weight * (k as f64).powi(n as i32));
    }
    acc.value() / std::f64::consts::E
}

/// `e^{xL} Bel_{n,λ}(x)` (double-sum form) against
/// `Σ_{k=0}^{terms} (xL)^k/k! Σ_l k^l λ^{n-l} S1(n,l)`.
pub fn exponential_series_check(
    n: usize,
    lambda: f64,
    x: f64,
    terms: usize,
    tol: f64,
) -> Result<NumericCheck, Error> {
    let xl = x * l_value(lambda)?;
    let lhs = xl.exp() * eval_at(&bell_double_sum(n), lambda, x)?;

    let s1 = StirlingTable::new(StirlingKind::First, n);
    let s1_row: Vec<f64> = s1
        .row(n)
        .iter()
        .map(|v| Rational::from(v.clone()).to_f64())
        .collect();
    let mut weight = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 0..=terms {
        if k > 0 {
            weight *= xl / k as f64;
        }
        let mut inner = CompensatedSum::new();
        for (l, s) in s1_row.iter().enumerate() {
            inner.add(s * (k as f64).powi(l as i32) * lambda.powi((n - l) as i32));
        }
        acc.add(weight * inner.value());
    }
    let params = NumericParams {
        n,
        lambda: Some(lambda),
        x,
        terms: Some(terms),
    };
    Ok(NumericCheck::new("numeric.exponential_series", params, lhs, acc.value(), tol))
}

/// Truncated degenerate Dobiński sum against the closed form.
pub fn dobinski_degenerate_check(
    n: usize,
    lambda: f64,
    x: f64,
    terms: usize,
    tol: f64,
) -> Result<NumericCheck, Error> {
    let lhs = dobinski_degenerate(n, lambda, x, terms)?;
    let rhs = eval_bel_numeric(n, lambda, x)?;
    let params = NumericParams {
        n,
        lambda: Some(lambda),
        x,
        terms: Some(terms),
    };
    Ok(NumericCheck::new("numeric.dobinski_degenerate", params, lhs, rhs, tol))
}

/// Truncated classical Dobiński sum against the exact Bell number.
pub fn dobinski_classical_check(n: usize, terms: usize, tol: f64) -> NumericCheck {
    let exact = bell_number(n);
    let params = NumericParams {
        n,
        lambda: None,
        x: 1.0,
        terms: Some(terms),
    };
    NumericCheck::new(
        "numeric.dobinski_classical",
        params,
        dobinski_classical(n, terms),
        exact,
        tol,
    )
}

fn bell_number(n: usize) -> f64 {
    bell_polynomial(n)
        .terms()
        .map(|(_, c)| c.clone())
        .sum::<Rational>()
        .to_f64()
}

/// `Bel_{n,λ}(x)` against the classical `Bel_n(x)` for each `λ`.
pub fn limit_sweep(
    n: usize,
    x: f64,
    lambdas: &[f64],
    tol: f64,
) -> Result<Vec<NumericCheck>, Error> {
    let classical = bell_polynomial(n).eval_f64(&Point {
        lambda: 0.0,
        l: 1.0,
        x,
        y: 0.0,
    });
    lambdas
        .iter()
        .map(|&lambda| {
            let lhs = eval_bel_numeric(n, lambda, x)?;
            let params = NumericParams {
                n,
                lambda: Some(lambda),
                x,
                terms: None,
            };
            Ok(NumericCheck::new("numeric.limit", params, lhs, classical, tol))
        })
        .collect()
}

/// The numeric grid for `n <= min(n_max, GRID_N_MAX)`: truncated degenerate
/// Dobiński, the exponential series identity, and classical Dobiński.
pub fn numeric_suite(n_max: usize, terms: usize, tol: f64) -> Result<Vec<NumericCheck>, Error> {
    let top = n_max.min(GRID_N_MAX);
    let mut out = Vec::new();
    for n in 0..=top {
        for &lambda in &GRID_LAMBDAS {
            for &x in &GRID_XS {
                out.push(dobinski_degenerate_check(n, lambda, x, terms, tol)?);
            }
        }
    }
    for n in 0..=top {
        for &lambda in &GRID_LAMBDAS {
            for &x in &GRID_XS {
                out.push(exponential_series_check(n, lambda, x, terms, tol)?);
            }
        }
    }
    for n in 0..=top {
        out.push(dobinski_classical_check(n, terms, tol));
    }
    Ok(out)
}
