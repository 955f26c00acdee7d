//! Sparse polynomials over the rationals in the four formal variables
//! `λ`, `L`, `x` and `y`.
//!
//! `L` stands for `log(1+λ)/λ`. It is transcendental over `Q(λ)`, so treating
//! it as an independent indeterminate loses nothing: two expressions agree as
//! functions exactly when they agree as polynomials in `Q[λ, L, x, y]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::Rational;
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Lambda,
    L,
    X,
    Y,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Lambda, Var::L, Var::X, Var::Y];

    fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::Lambda => "λ",
            Var::L => "L",
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

/// Exponent vector `(e_λ, e_L, e_x, e_y)`.
///
/// Ordered graded-lexicographically: total degree first, then the exponents
/// of `λ, L, x, y` in that priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(lambda: u32, l: u32, x: u32, y: u32) -> Self {
        Monomial([lambda, l, x, y])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn with_exponent(mut self, v: Var, e: u32) -> Self {
        self.0[v.index()] = e;
        self
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical sparse polynomial. No stored coefficient is zero, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

/// Values for all four variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    pub lambda: T,
    pub l: T,
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn get(&self, v: Var) -> &T {
        match v {
            Var::Lambda => &self.lambda,
            Var::L => &self.l,
            Var::X => &self.x,
            Var::Y => &self.y,
        }
    }
}

/// Partial map from variables to replacement polynomials.
#[derive(Clone, Debug, Default)]
pub struct Bindings([Option<MPoly>; 4]);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, v: Var, p: MPoly) -> Self {
        self.0[v.index()] = Some(p);
        self
    }

    pub fn get(&self, v: Var) -> Option<&MPoly> {
        self.0[v.index()].as_ref()
    }
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Rational::from_integer(c))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Rational::one(), Monomial::var(v))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// Builds a canonical polynomial from arbitrary terms: duplicates are
    /// summed and zero coefficients dropped.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(raw: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in raw {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    /// Highest exponent of `v` over all terms; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Collects the terms whose `v` exponent is `e`, with `v` removed.
    pub fn coeff_of(&self, v: Var, e: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == e)
                .map(|(m, c)| (m.with_exponent(v, 0), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: Monomial) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, a)| (*m * mono, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution; unbound variables stay formal.
    pub fn substitute(&self, bindings: &Bindings) -> MPoly {
        let mut powers: [Vec<MPoly>; 4] = Default::default();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::ONE;
            let mut term = MPoly::constant(c.clone());
            for v in Var::ALL {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                match bindings.get(v) {
                    None => kept = kept.with_exponent(v, e),
                    Some(p) => {
                        let cache = &mut powers[v.index()];
                        if cache.is_empty() {
                            cache.push(MPoly::one());
                        }
                        while cache.len() <= e as usize {
                            let next = cache.last().unwrap() * p;
                            cache.push(next);
                        }
                        term = &term * &cache[e as usize];
                    }
                }
            }
            out += &term.mul_monomial(&Rational::one(), kept);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        MPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e > 0).then(|| {
                (m.with_exponent(v, e - 1), c * &Rational::from_integer(e))
            })
        }))
    }

    pub fn derivative_x(&self) -> MPoly {
        self.derivative(Var::X)
    }

    /// Exact division by `L`, realised by lowering every `L` exponent by one.
    pub fn divide_by_l(&self) -> Result<MPoly, Error> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(Var::L);
            if e == 0 {
                return Err(Error::NotDivisibleByL);
            }
            terms.insert(m.with_exponent(Var::L, e - 1), c.clone());
        }
        Ok(MPoly { terms })
    }

    pub fn eval_exact(&self, at: &Point<Rational>) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                Var::ALL
                    .iter()
                    .fold(c.clone(), |acc, &v| acc * at.get(v).pow(m.exponent(v)))
            })
            .sum()
    }

    /// Floating-point evaluation. Coefficients are rounded to `f64` once and
    /// the terms are accumulated with compensated summation.
    pub fn eval_f64(&self, at: &Point<f64>) -> f64 {
        let mut acc = CompensatedSum::new();
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for v in Var::ALL {
                let e = m.exponent(v);
                if e > 0 {
                    t *= at.get(v).powi(e as i32);
                }
            }
            acc.add(t);
        }
        acc.value()
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        self += &rhs;
        self
    }
}

impl std::ops::AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, &(ca * cb));
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for MPoly {
    fn sum<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        iter.fold(MPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for v in Var::ALL {
        match m.exponent(v) {
            0 => {}
            1 => write!(f, "{}", v.symbol())?,
            e => write!(f, "{}^{}", v.symbol(), e)?,
        }
    }
    Ok(())
}

/// Highest-degree term first, e.g. `x^3 + 3x^2 + x` or `-(1/2)λLx + 1`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let is_const = *m == Monomial::ONE;
            if is_const {
                write!(f, "{a}")?;
            } else if !a.is_one() {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            fmt_monomial(m, f)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PowJson {
    lambda: u32,
    #[serde(rename = "L")]
    l: u32,
    x: u32,
    y: u32,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    pow: PowJson,
}

/// JSON array of `{"coeff": "p/q", "pow": {...}}`, highest monomial first.
impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                pow: PowJson {
                    lambda: m.exponent(Var::Lambda),
                    l: m.exponent(Var::L),
                    x: m.exponent(Var::X),
                    y: m.exponent(Var::Y),
                },
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<TermJson>::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let c: Rational = t.coeff.parse().map_err(serde::de::Error::custom)?;
            let m = Monomial::new(t.pow.lambda, t.pow.l, t.pow.x, t.pow.y);
            terms.push((m, c));
        }
        Ok(MPoly::from_terms(terms))
    }
}
