//! Truncated power series in `t` with polynomial coefficients.
//!
//! These expand the defining generating functions directly and serve as the
//! brute-force reference for every closed form in [`crate::bell`].
//!
//! Coefficients are stored in ordinary form: `Σ c_n t^n`. Quantities defined
//! by exponential generating functions are recovered by multiplying by `n!`
//! at the boundary.

use crate::combinatorics::{binomial, factorial, falling_factorial_general};
use crate::error::Error;
use crate::poly::{MPoly, Monomial};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<MPoly>,
}

impl Series {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients
    /// are kept.
    pub fn new(mut coeffs: Vec<MPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MPoly::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::new(vec![MPoly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &MPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn scale(&self, p: &MPoly) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series, Error> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Series) -> Result<Series, Error> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = vec![MPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Ok(Series { coeffs })
    }

    pub fn pow(&self, k: usize) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// `exp(s)` for a series with zero constant term, as the finite sum
    /// `Σ_{m <= N} s^m / m!`, which is exact at truncation order `N`.
    pub fn exp(&self) -> Result<Series, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp requires a zero constant term".into(),
            ));
        }
        let order = self.order();
        let mut acc = Series::one(order);
        let mut power = Series::one(order);
        for m in 1..=order {
            power = power.mul(self)?;
            let inv = Rational::new(1, factorial(m)).expect("nonzero");
            acc = acc.add(&power.scale(&MPoly::constant(inv)))?;
        }
        Ok(acc)
    }

    fn check_order(&self, other: &Series) -> Result<(), Error> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }
}

/// `F(t) = (1+λt)^{1/λ} - 1 = Σ_{n>=1} (1|λ)_n t^n / n!`, truncated at `order`.
pub fn series_f(order: usize) -> Series {
    let one = MPoly::one();
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                MPoly::zero()
            } else {
                let inv = Rational::new(1, factorial(n)).expect("nonzero");
                falling_factorial_general(&one, n).scale(&inv)
            }
        })
        .collect();
    Series::new(coeffs, order)
}

/// Coefficient of `t^n` in `F(t)^k`, by the alternating binomial closed form
/// `(1/n!) Σ_j (-1)^{k-j} C(k,j) (j|λ)_n`.
///
/// Zero when `k > n`, since `F` has no constant term.
pub fn composita_f(n: usize, k: usize) -> MPoly {
    if k > n {
        return MPoly::zero();
    }
    let sum: MPoly = (0..=k)
        .map(|j| {
            let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
            let c = Rational::from(binomial(k as u64, j as i64) * sign);
            falling_factorial_general(&MPoly::integer(j as i64), n).scale(&c)
        })
        .sum();
    sum.scale(&Rational::new(1, factorial(n)).expect("nonzero"))
}

/// `Bel_{n,λ}(x) = n! [t^n] exp(xL·F(t))`, expanded directly from the
/// generating function.
pub fn oracle_degenerate_bell(n: usize) -> MPoly {
    let xl = MPoly::monomial(Rational::one(), Monomial::new(0, 1, 1, 0));
    let inner = series_f(n).scale(&xl);
    let e = inner.exp().expect("F has zero constant term");
    e.coeff(n).scale(&Rational::from(factorial(n)))
}

/// `S2(n,m|λ) = (n!/m!) [t^n] F(t)^m`.
pub fn oracle_degenerate_stirling2(n: usize, m: usize) -> Result<MPoly, Error> {
    if m > n {
        return Err(Error::IndexOutOfRange { n, k: m });
    }
    let scale = Rational::new(factorial(n), factorial(m)).expect("nonzero");
    Ok(series_f(n).pow(m).coeff(n).scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn lam() -> MPoly {
        MPoly::var(Var::Lambda)
    }

    fn one() -> MPoly {
        MPoly::one()
    }

    // (1-λ)(1-2λ)
    fn f3() -> MPoly {
        &(&one() - &lam()) * &(&one() - &lam().scale(&q(2, 1)))
    }

    #[test]
    fn f_coefficients() {
        let f = series_f(3);
        assert_eq!(f.order(), 3);
        assert!(f.coeff(0).is_zero());
        assert_eq!(f.coeff(1), &one());
        assert_eq!(f.coeff(2), &(&one() - &lam()).scale(&q(1, 2)));
        assert_eq!(f.coeff(3), &f3().scale(&q(1, 6)));
    }

    #[test]
    fn cauchy_product() {
        let f = series_f(4);
        assert_eq!(f.mul(&Series::one(4)).unwrap(), f);

        let t = Series::new(vec![MPoly::zero(), one()], 1);
        assert_eq!(t.mul(&t).unwrap(), Series::zero(1));

        let f2 = series_f(2);
        let sq = f2.mul(&f2).unwrap();
        assert_eq!(sq.coeff(2), &one());
    }

    #[test]
    fn order_mismatch_rejected() {
        let err = series_f(2).mul(&series_f(3)).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 3 });
    }

    #[test]
    fn powers() {
        let f = series_f(3);
        assert_eq!(f.pow(0), Series::one(3));
        assert_eq!(f.pow(1), f);
        assert_eq!(f.pow(2).coeff(3), &(&one() - &lam()));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(Series::one(2).exp().is_err());
    }

    #[test]
    fn composita_values() {
        assert_eq!(composita_f(2, 1), (&one() - &lam()).scale(&q(1, 2)));
        for n in 1..8 {
            assert_eq!(composita_f(n, n), one());
        }
        assert_eq!(composita_f(3, 2), &one() - &lam());
        assert!(composita_f(2, 3).is_zero());
        // (2|λ)_3 = 2(2-λ)(2-2λ)
        let two = MPoly::integer(2);
        let expected = &(&two * &(&two - &lam())) * &(&two - &lam().scale(&q(2, 1)));
        assert_eq!(falling_factorial_general(&two, 3), expected);
    }

    #[test]
    fn oracle_bell_low_orders() {
        let lx = MPoly::monomial(q(1, 1), Monomial::new(0, 1, 1, 0));
        assert_eq!(oracle_degenerate_bell(0), one());
        assert_eq!(oracle_degenerate_bell(1), lx);
        let expected = &lx.pow(2) + &(&(&one() - &lam()) * &lx);
        assert_eq!(oracle_degenerate_bell(2), expected);
    }

    #[test]
    fn oracle_stirling_low_orders() {
        assert_eq!(oracle_degenerate_stirling2(2, 1).unwrap(), &one() - &lam());
        assert_eq!(oracle_degenerate_stirling2(3, 1).unwrap(), f3());
        for n in 0..7 {
            assert_eq!(oracle_degenerate_stirling2(n, n).unwrap(), one());
        }
        assert!(oracle_degenerate_stirling2(1, 2).is_err());
    }
}
