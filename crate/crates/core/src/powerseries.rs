//! Truncated formal power series.
//!
//! A [`TruncatedSeries`] stores `c_0..=c_K` for the local variable `x` around
//! its development point `center`. Every operation keeps coefficients up to
//! the stored order and drops the rest, so results are exact truncations of
//! the true products whenever the scalar type is exact.

use serde::{Deserialize, Serialize};

use crate::error::{AbelError, Result};
use crate::scalar::{parse_rational, Rational, RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
    center: S,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(coeffs: Vec<S>, center: S) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(AbelError::InvalidSeries("no coefficients".into()));
        }
        if let Some(m) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(AbelError::InvalidSeries(format!(
                "coefficient {m} is not finite"
            )));
        }
        if !center.is_finite() {
            return Err(AbelError::InvalidSeries("center is not finite".into()));
        }
        Ok(Self { coeffs, center })
    }

    /// Series developed at 0.
    pub fn at_zero(coeffs: Vec<S>) -> Result<Self> {
        let center = coeffs
            .first()
            .ok_or_else(|| AbelError::InvalidSeries("no coefficients".into()))?
            .zero_like();
        Self::new(coeffs, center)
    }

    pub fn constant(c: S, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); order + 1];
        coeffs[0] = c;
        Self {
            coeffs,
            center: zero,
        }
    }

    /// The map `x -> a + b x`, padded with zeros up to `order`.
    pub fn affine(b: S, a: S, order: usize) -> Self {
        let mut s = Self::constant(a, order);
        if order >= 1 {
            s.coeffs[1] = b;
        }
        s
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, m: usize) -> S {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.center.zero_like())
    }

    pub fn center(&self) -> &S {
        &self.center
    }

    /// Inclusive truncation degree.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncate(&self, order: usize) -> Self {
        let zero = self.center.zero_like();
        let coeffs = (0..=order)
            .map(|m| self.coeffs.get(m).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        Self {
            coeffs,
            center: self.center.clone(),
        }
    }

    fn check_center(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return Err(AbelError::MismatchedCenters {
                left: self.center.render(),
                right: other.center.render(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|m| self.coeffs[m].clone() + other.coeffs[m].clone())
            .collect();
        Ok(Self {
            coeffs,
            center: self.center.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-self.center.one_like()))
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
            center: self.center.clone(),
        }
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let zero = self.center.zero_like();
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(zero.clone(), |acc, k| {
                    acc + self.coeffs[n - k].clone() * other.coeffs[k].clone()
                })
            })
            .collect();
        Self {
            coeffs,
            center: self.center.clone(),
        }
    }

    /// `f^n` by repeated truncated multiplication; `f^0` is the constant 1.
    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(self.center.one_like(), self.order());
        acc.center = self.center.clone();
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// All powers `f^0..=f^n`, sharing the multiplications.
    pub fn powers(&self, n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = Self::constant(self.center.one_like(), self.order());
        acc.center = self.center.clone();
        out.push(acc.clone());
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
            out.push(acc.clone());
        }
        out
    }

    /// Shift conjugation `g(x) = f(x + s) - s`, computed on the stored
    /// polynomial by Horner substitution of `x + s`. The development point
    /// is unchanged.
    pub fn recenter(&self, s: &S) -> Self {
        let zero = self.center.zero_like();
        let order = self.order();
        // Horner: acc <- acc * (x + s) + c_m, descending in m.
        let mut acc = vec![zero.clone(); order + 1];
        for c in self.coeffs.iter().rev() {
            let mut next = vec![zero.clone(); order + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i] = next[i].clone() + a.clone() * s.clone();
                if i < order {
                    next[i + 1] = next[i + 1].clone() + a.clone();
                }
            }
            next[0] = next[0].clone() + c.clone();
            acc = next;
        }
        acc[0] = acc[0].clone() - s.clone();
        Self {
            coeffs: acc,
            center: self.center.clone(),
        }
    }

    /// `self(inner(x))` treating `self` as a polynomial, truncated to `order`.
    /// The inner series may have a nonzero constant term because the outer
    /// sum is finite.
    pub fn compose(&self, inner: &Self, order: usize) -> Result<Self> {
        self.check_center(inner)?;
        if inner.order() < order {
            return Err(AbelError::InsufficientOrder {
                need: order,
                have: inner.order(),
            });
        }
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.center.zero_like(), order);
        acc.center = self.center.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }

    /// Evaluate the stored polynomial at local coordinate `x`.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(self.center.zero_like(), |acc, c| {
                acc * x.clone() + c.clone()
            })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(&f).collect(),
            center: f(&self.center),
        }
    }
}

impl TruncatedSeries<Rational> {
    pub fn to_scalar<S: Scalar>(&self, ctx: &S::Context) -> TruncatedSeries<S> {
        self.map(|c| S::from_rational(c, ctx))
    }
}

/// Coefficients `1/m!` of `e^x` up to `order`.
pub fn exp_series<S: Scalar>(order: usize, ctx: &S::Context) -> TruncatedSeries<S> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut fact = Rational::from(1);
    for m in 0..=order {
        if m > 0 {
            fact *= Rational::from(m);
        }
        coeffs.push(S::from_rational(&(Rational::from(1) / fact.clone()), ctx));
    }
    TruncatedSeries {
        coeffs,
        center: S::zero(ctx),
    }
}

/// `g(x) = e^(x+s) - s` at 0: coefficients `e^s/m!`, constant term `e^s - s`.
pub fn exp_conjugate_series<S: RealScalar>(s: &S, order: usize) -> TruncatedSeries<S> {
    let es = s.exp();
    let mut g = exp_series::<S>(order, &s.ctx()).scale(&es);
    g.coeffs[0] = g.coeffs[0].clone() - s.clone();
    g
}

/// Free-function forms of the core operations.
pub fn series_mul<S: Scalar>(
    a: &TruncatedSeries<S>,
    b: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>> {
    a.mul(b)
}

pub fn series_pow<S: Scalar>(f: &TruncatedSeries<S>, n: usize) -> TruncatedSeries<S> {
    f.pow(n)
}

pub fn recenter<S: Scalar>(f: &TruncatedSeries<S>, s: &S) -> TruncatedSeries<S> {
    f.recenter(s)
}

/// A JSON number or a decimal / `p/q` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Number(f64),
    Text(String),
}

impl Literal {
    /// Numbers go through their shortest decimal form, so `0.1` is `1/10`.
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Literal::Number(v) if !v.is_finite() => Err(AbelError::Parse(v.to_string())),
            Literal::Number(v) => parse_rational(&format!("{v:?}")),
            Literal::Text(t) => parse_rational(t),
        }
    }
}

/// On-disk series: `{ "center": .., "coeffs": [..] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(default = "zero_literal")]
    pub center: Literal,
    pub coeffs: Vec<Literal>,
}

fn zero_literal() -> Literal {
    Literal::Number(0.0)
}

impl SeriesFile {
    pub fn parse(json: &str) -> Result<TruncatedSeries<Rational>> {
        let file: SeriesFile =
            serde_json::from_str(json).map_err(|e| AbelError::InvalidSeries(e.to_string()))?;
        file.to_series()
    }

    pub fn to_series(&self) -> Result<TruncatedSeries<Rational>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(Literal::to_rational)
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(coeffs, self.center.to_rational()?)
    }

    pub fn from_series(f: &TruncatedSeries<Rational>) -> Self {
        Self {
            center: Literal::Text(f.center().render()),
            coeffs: f
                .coeffs()
                .iter()
                .map(|c| Literal::Text(c.render()))
                .collect(),
        }
    }
}
