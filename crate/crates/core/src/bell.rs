//! Closed forms for the degenerate Bell polynomials `Bel_{n,λ}(x)` and the
//! degenerate Stirling numbers `S2(n,m|λ)`, plus exact identity checks.
//!
//! Each constructor is built from an independent formula. All of them must
//! agree with [`crate::series::oracle_degenerate_bell`] as canonical
//! polynomials in `Q[λ, L, x, y]`.

use serde::Serialize;

use crate::combinatorics::{
    bell_polynomial, bell_polynomial_from, binomial, factorial, falling_factorial_general,
    StirlingKind, StirlingTable,
};
use crate::error::Error;
use crate::poly::{Bindings, MPoly, Monomial, Var};
use crate::rational::Rational;
use crate::series::{composita_f, oracle_degenerate_bell, oracle_degenerate_stirling2};

struct Tables {
    s1: StirlingTable,
    s2: StirlingTable,
}

impl Tables {
    fn new(n_max: usize) -> Self {
        Tables {
            s1: StirlingTable::new(StirlingKind::First, n_max),
            s2: StirlingTable::new(StirlingKind::Second, n_max),
        }
    }

    fn s1(&self, n: usize, k: usize) -> Rational {
        Rational::from(self.s1.at(n, k).clone())
    }

    fn s2(&self, n: usize, k: usize) -> Rational {
        Rational::from(self.s2.at(n, k).clone())
    }

    /// `Σ_{k=m}^{n} S1(n,k) S2(k,m) λ^{n-k}`
    fn degenerate_stirling2(&self, n: usize, m: usize) -> MPoly {
        MPoly::from_terms((m..=n).map(|k| {
            let c = self.s1(n, k) * self.s2(k, m);
            (Monomial::new((n - k) as u32, 0, 0, 0), c)
        }))
    }
}

fn lx_power(m: usize) -> Monomial {
    Monomial::new(0, m as u32, m as u32, 0)
}

/// `S2(n,m|λ) = Σ_{k=m}^{n} S1(n,k) S2(k,m) λ^{n-k}`.
pub fn degenerate_stirling2_closed(n: usize, m: usize) -> Result<MPoly, Error> {
    if m > n {
        return Err(Error::IndexOutOfRange { n, k: m });
    }
    Ok(Tables::new(n).degenerate_stirling2(n, m))
}

/// Double sum `Σ_{k<=n} Σ_{m<=k} L^m S1(n,k) S2(k,m) λ^{n-k} x^m`.
pub fn bell_double_sum(n: usize) -> MPoly {
    let t = Tables::new(n);
    let mut terms = Vec::new();
    for k in 0..=n {
        for m in 0..=k {
            let c = t.s1(n, k) * t.s2(k, m);
            terms.push((Monomial::new((n - k) as u32, m as u32, m as u32, 0), c));
        }
    }
    MPoly::from_terms(terms)
}

/// `Σ_m S2(n,m|λ) L^m x^m`. This is the canonical constructor used by the
/// verifiers and the CLI.
pub fn bell_degenerate_stirling(n: usize) -> MPoly {
    let t = Tables::new(n);
    (0..=n)
        .map(|m| t.degenerate_stirling2(n, m).mul_monomial(&Rational::one(), lx_power(m)))
        .sum()
}

/// `L x Σ_{k=1}^{n} Σ_{j=1}^{k} S1(n,k) λ^{n-k} C(k-1,j-1) Bel_{j-1}(xL)`,
/// valid for `n >= 1`.
pub fn bell_via_classical(n: usize) -> Result<MPoly, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the classical Bell expansion requires n >= 1".into(),
        ));
    }
    let t = Tables::new(n);
    let xl = MPoly::monomial(Rational::one(), lx_power(1));
    let to_xl = Bindings::new().bind(Var::X, xl.clone());
    let classical: Vec<MPoly> = (0..n)
        .map(|j| bell_polynomial_from(&t.s2, j).substitute(&to_xl))
        .collect();

    let mut sum = MPoly::zero();
    for k in 1..=n {
        let inner: MPoly = (1..=k)
            .map(|j| {
                let c = Rational::from(binomial(k as u64 - 1, j as i64 - 1));
                classical[j - 1].scale(&c)
            })
            .sum();
        let weight = t.s1(n, k);
        sum += &inner.mul_monomial(&weight, Monomial::new((n - k) as u32, 0, 0, 0));
    }
    Ok(&xl * &sum)
}

/// Composition `R(F(t))` with `r(k) = L^k x^k / k!`, read off through the
/// composita of `F`. The composition yields ordinary coefficients, so the
/// result is multiplied by `n!` to obtain `Bel_{n,λ}(x)`.
pub fn bell_composita(n: usize) -> MPoly {
    let a_n = composita_coefficient(n);
    a_n.scale(&Rational::from(factorial(n)))
}

/// The composita sum with weights `(-1)^{k-j} C(k,j) / (n! k!)` taken
/// literally, without the `n!` rescaling. This is the ordinary coefficient
/// `[t^n]` of the generating function, i.e. `Bel_{n,λ}(x) / n!`; kept as a
/// control for the normalization tests.
pub fn bell_composita_literal(n: usize) -> MPoly {
    composita_coefficient(n)
}

/// `a(n) = [t^n] R(F(t))`
fn composita_coefficient(n: usize) -> MPoly {
    if n == 0 {
        return MPoly::one();
    }
    (1..=n)
        .map(|k| {
            let r_k = Rational::new(1, factorial(k)).expect("nonzero");
            composita_f(n, k).mul_monomial(&r_k, lx_power(k))
        })
        .sum()
}

/// `Bel_0, ..., Bel_n` from
/// `Bel_{n+1,λ}(x) = xL Σ_k C(n,k) Bel_{k,λ}(x) (1-λ|λ)_{n-k}`.
pub fn bell_recurrence_table(n: usize) -> Vec<MPoly> {
    let one_minus_lambda = &MPoly::one() - &MPoly::var(Var::Lambda);
    let shifted: Vec<MPoly> = (0..n)
        .map(|j| falling_factorial_general(&one_minus_lambda, j))
        .collect();
    let xl = lx_power(1);
    let mut table = vec![MPoly::one()];
    for m in 0..n {
        let sum: MPoly = (0..=m)
            .map(|k| {
                let c = Rational::from(binomial(m as u64, k as i64));
                (&table[k] * &shifted[m - k]).scale(&c)
            })
            .sum();
        table.push(sum.mul_monomial(&Rational::one(), xl));
    }
    table
}

pub fn bell_recurrence(n: usize) -> MPoly {
    bell_recurrence_table(n).pop().expect("non-empty")
}

/// `λ -> 0` realised as the substitution `λ ↦ 0, L ↦ 1`.
pub fn limit_lambda_zero(p: &MPoly) -> MPoly {
    let b = Bindings::new()
        .bind(Var::Lambda, MPoly::zero())
        .bind(Var::L, MPoly::one());
    p.substitute(&b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub n: usize,
    pub lhs: MPoly,
    pub rhs: MPoly,
}

/// Outcome of an exact identity check over `range`. `passed` holds exactly
/// when `first_failure` is `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub range: (usize, usize),
    pub passed: bool,
    pub first_failure: Option<Failure>,
}

impl VerificationReport {
    /// Runs `sides(n)` for each `n` in `lo..=hi` and stops at the first
    /// mismatch. An empty range passes.
    pub fn check<F>(identity: &str, lo: usize, hi: usize, mut sides: F) -> Self
    where
        F: FnMut(usize) -> (MPoly, MPoly),
    {
        for n in lo..=hi {
            let (lhs, rhs) = sides(n);
            if lhs != rhs {
                return VerificationReport {
                    identity: identity.to_string(),
                    range: (lo, hi),
                    passed: false,
                    first_failure: Some(Failure { n, lhs, rhs }),
                };
            }
        }
        VerificationReport {
            identity: identity.to_string(),
            range: (lo, hi),
            passed: true,
            first_failure: None,
        }
    }
}

/// `Bel_{n,λ}(x+y) = Σ_m C(n,m) Bel_{m,λ}(x) Bel_{n-m,λ}(y)`.
pub fn addition_sides(n: usize) -> (MPoly, MPoly) {
    let x = MPoly::var(Var::X);
    let y = MPoly::var(Var::Y);
    let to_sum = Bindings::new().bind(Var::X, &x + &y);
    let to_y = Bindings::new().bind(Var::X, y);
    let bells: Vec<MPoly> = (0..=n).map(bell_degenerate_stirling).collect();
    let lhs = bells[n].substitute(&to_sum);
    let rhs = (0..=n)
        .map(|m| {
            let c = Rational::from(binomial(n as u64, m as i64));
            (&bells[m] * &bells[n - m].substitute(&to_y)).scale(&c)
        })
        .sum();
    (lhs, rhs)
}

pub fn verify_addition(n: usize) -> VerificationReport {
    VerificationReport::check("addition", n, n, addition_sides)
}

/// Left side is `(1/L) ∂_x Bel_{n,λ}(x)`; the division lowers each
/// `L` exponent and fails if any term has none. Right side is
/// `Σ_{m<n} C(n,m) Bel_{m,λ}(x) (1|λ)_{n-m}`.
pub fn derivative_sides(n: usize) -> Result<(MPoly, MPoly), Error> {
    let bells: Vec<MPoly> = (0..=n).map(bell_degenerate_stirling).collect();
    let lhs = bells[n].derivative_x().divide_by_l()?;
    let one = MPoly::one();
    let rhs = (0..n)
        .map(|m| {
            let c = Rational::from(binomial(n as u64, m as i64));
            (&bells[m] * &falling_factorial_general(&one, n - m)).scale(&c)
        })
        .sum();
    Ok((lhs, rhs))
}

pub fn verify_derivative(n: usize) -> VerificationReport {
    derivative_report("derivative", n, n)
}

fn derivative_report(identity: &str, lo: usize, hi: usize) -> VerificationReport {
    VerificationReport::check(identity, lo, hi, |n| match derivative_sides(n) {
        Ok(sides) => sides,
        // an undivisible derivative is reported as the raw derivative
        // against the empty polynomial
        Err(_) => (bell_degenerate_stirling(n).derivative_x(), MPoly::zero()),
    })
}

/// `Bel_{n+1}(x)` against `x Σ_j C(n,j) Bel_j(x)`.
pub fn classical_recurrence_sides(n: usize) -> (MPoly, MPoly) {
    let bells: Vec<MPoly> = (0..=n + 1).map(bell_polynomial).collect();
    let rhs: MPoly = (0..=n)
        .map(|j| bells[j].scale(&Rational::from(binomial(n as u64, j as i64))))
        .sum();
    (
        bells[n + 1].clone(),
        rhs.mul_monomial(&Rational::one(), Monomial::var(Var::X)),
    )
}

/// Right side of the degenerate recurrence for `Bel_{n+1,λ}` after
/// `λ ↦ 0, L ↦ 1`, against the right side of the classical one.
pub fn recurrence_limit_sides(n: usize) -> (MPoly, MPoly) {
    let one_minus_lambda = &MPoly::one() - &MPoly::var(Var::Lambda);
    let degenerate: MPoly = (0..=n)
        .map(|k| {
            let c = Rational::from(binomial(n as u64, k as i64));
            (&bell_degenerate_stirling(k) * &falling_factorial_general(&one_minus_lambda, n - k))
                .scale(&c)
        })
        .sum();
    let degenerate = degenerate.mul_monomial(&Rational::one(), lx_power(1));
    (limit_lambda_zero(&degenerate), classical_recurrence_sides(n).1)
}

/// Degenerate Stirling row `n` packed as `Σ_m S2(n,m|λ) x^m`.
fn stirling_row(n: usize, entry: impl Fn(usize) -> MPoly) -> MPoly {
    (0..=n)
        .map(|m| entry(m).mul_monomial(&Rational::one(), Monomial::new(0, 0, m as u32, 0)))
        .sum()
}

/// Every exact check up to `n_max`, in a fixed order.
pub fn exact_suite(n_max: usize) -> Vec<VerificationReport> {
    let oracle: Vec<MPoly> = (0..=n_max).map(oracle_degenerate_bell).collect();
    let recurrence = bell_recurrence_table(n_max);
    let o = |n: usize| oracle[n].clone();

    let mut reports = vec![
        VerificationReport::check("bell.double_sum == series", 0, n_max, |n| {
            (bell_double_sum(n), o(n))
        }),
        VerificationReport::check("bell.degenerate_stirling == series", 0, n_max, |n| {
            (bell_degenerate_stirling(n), o(n))
        }),
        VerificationReport::check("bell.via_classical == series", 1, n_max, |n| {
            (bell_via_classical(n).expect("n >= 1"), o(n))
        }),
        VerificationReport::check("bell.composita == series", 0, n_max, |n| {
            (bell_composita(n), o(n))
        }),
        VerificationReport::check("bell.recurrence == series", 0, n_max, |n| {
            (recurrence[n].clone(), o(n))
        }),
        VerificationReport::check("dstirling.closed == series", 0, n_max, |n| {
            let t = Tables::new(n);
            (
                stirling_row(n, |m| t.degenerate_stirling2(n, m)),
                stirling_row(n, |m| oracle_degenerate_stirling2(n, m).expect("m <= n")),
            )
        }),
        VerificationReport::check("limit.bell", 0, n_max, |n| {
            (limit_lambda_zero(&bell_degenerate_stirling(n)), bell_polynomial(n))
        }),
        VerificationReport::check("limit.dstirling", 0, n_max, |n| {
            let t = Tables::new(n);
            (
                limit_lambda_zero(&stirling_row(n, |m| t.degenerate_stirling2(n, m))),
                stirling_row(n, |m| MPoly::constant(t.s2(n, m))),
            )
        }),
    ];
    if n_max >= 1 {
        reports.push(VerificationReport::check(
            "recurrence.classical",
            0,
            n_max - 1,
            classical_recurrence_sides,
        ));
        reports.push(VerificationReport::check(
            "recurrence.limit",
            0,
            n_max - 1,
            recurrence_limit_sides,
        ));
    }
    reports.push(VerificationReport::check("addition", 0, n_max, addition_sides));
    reports.push(derivative_report("derivative", 1, n_max));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn lam() -> MPoly {
        MPoly::var(Var::Lambda)
    }

    fn lx(m: usize) -> MPoly {
        MPoly::monomial(q(1, 1), lx_power(m))
    }

    fn one() -> MPoly {
        MPoly::one()
    }

    fn bel2() -> MPoly {
        &lx(2) + &(&(&one() - &lam()) * &lx(1))
    }

    #[test]
    fn degenerate_stirling_values() {
        assert_eq!(degenerate_stirling2_closed(2, 1).unwrap(), &one() - &lam());
        for n in 0..8 {
            assert_eq!(degenerate_stirling2_closed(n, n).unwrap(), one());
        }
        assert_eq!(
            degenerate_stirling2_closed(3, 2).unwrap(),
            &MPoly::integer(3) - &lam().scale(&q(3, 1))
        );
        assert!(degenerate_stirling2_closed(2, 3).is_err());
    }

    #[test]
    fn double_sum_low_orders() {
        assert_eq!(bell_double_sum(0), one());
        assert_eq!(bell_double_sum(1), lx(1));
        assert_eq!(bell_double_sum(2), bel2());
    }

    #[test]
    fn degenerate_stirling_form_low_orders() {
        assert_eq!(bell_degenerate_stirling(0), one());
        assert_eq!(bell_degenerate_stirling(2), bel2());
        let f3 = &(&one() - &lam()) * &(&one() - &lam().scale(&q(2, 1)));
        let expected = &(&(&f3 * &lx(1)) + &(&(&MPoly::integer(3) - &lam().scale(&q(3, 1))) * &lx(2)))
            + &lx(3);
        assert_eq!(bell_degenerate_stirling(3), expected);
    }

    #[test]
    fn via_classical_low_orders() {
        assert!(bell_via_classical(0).is_err());
        assert_eq!(bell_via_classical(1).unwrap(), lx(1));
        assert_eq!(bell_via_classical(2).unwrap(), bel2());
        assert_eq!(bell_via_classical(3).unwrap(), bell_degenerate_stirling(3));
    }

    #[test]
    fn composita_low_orders() {
        assert_eq!(bell_composita(0), one());
        assert_eq!(bell_composita(1), lx(1));
        assert_eq!(bell_composita(2), bel2());
    }

    #[test]
    fn literal_composita_normalization_differs() {
        // literal normalization is off by n! for n = 2
        assert_ne!(bell_composita_literal(2), bel2());
        assert_eq!(bell_composita_literal(2), bel2().scale(&q(1, 2)));
        assert_eq!(bell_composita_literal(1), lx(1));
    }

    #[test]
    fn recurrence_low_orders() {
        assert_eq!(bell_recurrence(0), one());
        assert_eq!(bell_recurrence(1), lx(1));
        assert_eq!(bell_recurrence(2), bel2());
        assert_eq!(bell_recurrence(3), bell_degenerate_stirling(3));
    }

    #[test]
    fn limits() {
        let x = MPoly::var(Var::X);
        assert_eq!(limit_lambda_zero(&bel2()), &x.pow(2) + &x);
        assert_eq!(limit_lambda_zero(&bell_degenerate_stirling(0)), one());
        let d = degenerate_stirling2_closed(3, 2).unwrap();
        assert_eq!(limit_lambda_zero(&d), MPoly::integer(3));
    }

    #[test]
    fn addition_reports() {
        for n in 0..=4 {
            let r = verify_addition(n);
            assert!(r.passed, "{r:?}");
            assert!(r.first_failure.is_none());
        }
        let (lhs, rhs) = addition_sides(1);
        let expected = &MPoly::monomial(q(1, 1), Monomial::new(0, 1, 1, 0))
            + &MPoly::monomial(q(1, 1), Monomial::new(0, 1, 0, 1));
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn derivative_reports() {
        let (lhs, rhs) = derivative_sides(1).unwrap();
        assert_eq!(lhs, one());
        assert_eq!(rhs, one());
        let (lhs, rhs) = derivative_sides(2).unwrap();
        let expected = &lx(1).scale(&q(2, 1)) + &(&one() - &lam());
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
        for n in 1..=5 {
            assert!(verify_derivative(n).passed);
        }
    }

    #[test]
    fn failed_report_keeps_first_counterexample() {
        let r = VerificationReport::check("broken", 0, 5, |n| {
            (MPoly::integer(n as i64), MPoly::integer(if n < 3 { n as i64 } else { 0 }))
        });
        assert!(!r.passed);
        let f = r.first_failure.unwrap();
        assert_eq!(f.n, 3);
        assert_eq!(f.lhs, MPoly::integer(3));
        assert!(f.rhs.is_zero());
    }

    #[test]
    fn empty_range_passes() {
        let r = VerificationReport::check("empty", 1, 0, |_| unreachable!());
        assert!(r.passed);
    }

    #[test]
    fn report_json_schema() {
        let r = verify_addition(0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["identity"], "addition");
        assert_eq!(v["range"], serde_json::json!([0, 0]));
        assert_eq!(v["passed"], true);
        assert!(v["first_failure"].is_null());

        let bad = VerificationReport::check("x", 2, 2, |_| (MPoly::one(), MPoly::zero()));
        let v = serde_json::to_value(&bad).unwrap();
        assert_eq!(v["first_failure"]["n"], 2);
        assert_eq!(v["first_failure"]["rhs"], serde_json::json!([]));
    }

    #[test]
    fn small_suite_passes() {
        for r in exact_suite(5) {
            assert!(r.passed, "{r:?}");
        }
        for r in exact_suite(0) {
            assert!(r.passed, "{r:?}");
        }
    }
}
