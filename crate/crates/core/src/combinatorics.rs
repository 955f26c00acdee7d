//! Classical integer combinatorics: binomials, Stirling numbers of both
//! kinds, Bell polynomials, and the generalized falling factorial `(z|λ)_n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::poly::{MPoly, Monomial, Var};
use crate::rational::Rational;

/// `n` choose `k`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc == C(n, i), so the division is exact
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StirlingKind {
    /// Signed: coefficients of the falling factorial `(x)_n`.
    First,
    Second,
}

/// Triangular table of Stirling numbers for `0 <= k <= n <= n_max`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    kind: StirlingKind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind, n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigInt::one()]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row = vec![BigInt::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                let diag = &prev[k - 1];
                let up = prev.get(k).cloned().unwrap_or_default();
                *slot = match kind {
                    // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
                    StirlingKind::First => diag - BigInt::from(n - 1) * up,
                    // S(n,k) = S(n-1,k-1) + k S(n-1,k)
                    StirlingKind::Second => diag + BigInt::from(k) * up,
                };
            }
            rows.push(row);
        }
        StirlingTable { kind, rows }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigInt, Error> {
        if k > n || n > self.n_max() {
            return Err(Error::IndexOutOfRange { n, k });
        }
        Ok(&self.rows[n][k])
    }

    /// Entry `(n, k)` when `k <= n <= n_max`. Panics otherwise.
    pub fn at(&self, n: usize, k: usize) -> &BigInt {
        &self.rows[n][k]
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }
}

/// Signed Stirling number of the first kind.
pub fn stirling1(n: usize, k: usize) -> Result<BigInt, Error> {
    if k > n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    StirlingTable::new(StirlingKind::First, n).get(n, k).cloned()
}

pub fn stirling2(n: usize, k: usize) -> Result<BigInt, Error> {
    if k > n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    StirlingTable::new(StirlingKind::Second, n).get(n, k).cloned()
}

/// `Bel_n(x) = sum_k S2(n,k) x^k`.
pub fn bell_polynomial(n: usize) -> MPoly {
    let s2 = StirlingTable::new(StirlingKind::Second, n);
    bell_polynomial_from(&s2, n)
}

pub(crate) fn bell_polynomial_from(s2: &StirlingTable, n: usize) -> MPoly {
    MPoly::from_terms(
        s2.row(n)
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::new(0, 0, k as u32, 0), Rational::from(c.clone()))),
    )
}

/// `(z|λ)_n = z (z - λ) ... (z - (n-1)λ)`; the empty product for `n = 0`.
pub fn falling_factorial_general(z: &MPoly, n: usize) -> MPoly {
    let lambda = MPoly::var(Var::Lambda);
    (0..n).fold(MPoly::one(), |acc, i| {
        let factor = z - &lambda.scale(&Rational::from(i as i64));
        &acc * &factor
    })
}
