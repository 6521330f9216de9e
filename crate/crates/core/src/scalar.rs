//! Scalar arithmetic in three flavors: machine `f64`, binary big-floats with
//! a runtime precision, and exact rationals.
//!
//! Algorithms are generic over [`Scalar`]. Constants are materialized through
//! a [`Scalar::Context`], which is `()` for `f64` and [`Rational`] and the
//! working precision in bits for [`BigFloat`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Serialize};

use crate::error::{AbelError, Result};
use crate::linalg::{self, DenseMatrix};

/// Exact rational number.
pub type Rational = RBig;

/// Binary floating point number with round-half-even and per-value precision.
pub type BigFloat = FBig<HalfEven>;

/// Smallest precision accepted for big-float mode.
pub const MIN_BITS: usize = 24;

/// Default guard bits added on top of a computed working precision.
pub const DEFAULT_GUARD_BITS: usize = 64;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Context: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_rational(r: &Rational, ctx: &Self::Context) -> Self;

    /// The context a value was created in (its precision, for big-floats).
    fn ctx(&self) -> Self::Context;

    fn as_f64(&self) -> f64;

    /// Unit roundoff of arithmetic in `ctx`; zero when exact.
    fn unit_roundoff(ctx: &Self::Context) -> f64;

    fn is_finite(&self) -> bool;

    /// Full precision text: shortest round-trip for `f64`, decimal digits
    /// covering the precision for big-floats, `p/q` for rationals.
    fn render(&self) -> String;

    fn from_int(v: i64, ctx: &Self::Context) -> Self {
        Self::from_rational(&Rational::from(v), ctx)
    }

    fn from_ibig(v: &IBig, ctx: &Self::Context) -> Self {
        Self::from_rational(&Rational::from(v.clone()), ctx)
    }

    fn zero(ctx: &Self::Context) -> Self {
        Self::from_int(0, ctx)
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_int(1, ctx)
    }

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }

    fn is_zero(&self) -> bool {
        *self == self.zero_like()
    }

    fn abs(&self) -> Self {
        if *self < self.zero_like() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self^k` by repeated multiplication.
    fn powu(&self, k: usize) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.render())
    }

    /// Solve the square system `a x = rhs`. Rounding modes use LU with
    /// partial pivoting and one refinement step.
    fn solve_dense(a: &DenseMatrix<Self>, rhs: &[Self]) -> Result<Vec<Self>> {
        linalg::lu_solve(a, rhs)
    }
}

/// Scalars with a natural logarithm and exponential.
pub trait RealScalar: Scalar {
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
}

impl Scalar for f64 {
    type Context = ();
    const EXACT: bool = false;

    fn from_rational(r: &Rational, _: &()) -> Self {
        r.to_f64().value()
    }

    fn ctx(&self) {}

    fn as_f64(&self) -> f64 {
        *self
    }

    fn unit_roundoff(_: &()) -> f64 {
        f64::EPSILON / 2.0
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or_else(|| serde_json::Value::String(self.render()))
    }
}

impl RealScalar for f64 {
    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }
}

impl Scalar for BigFloat {
    type Context = usize;
    const EXACT: bool = false;

    fn from_rational(r: &Rational, bits: &usize) -> Self {
        let num = BigFloat::from(r.numerator().clone())
            .with_precision(*bits)
            .value();
        if *r.denominator() == UBig::ONE {
            return num;
        }
        let den = BigFloat::from(r.denominator().clone())
            .with_precision(*bits)
            .value();
        num / den
    }

    fn ctx(&self) -> usize {
        self.precision()
    }

    fn as_f64(&self) -> f64 {
        BigFloat::to_f64(self).value()
    }

    fn unit_roundoff(bits: &usize) -> f64 {
        (-(*bits as f64)).exp2()
    }

    fn is_finite(&self) -> bool {
        !self.repr().is_infinite()
    }

    fn render(&self) -> String {
        render_bigfloat(self)
    }
}

impl RealScalar for BigFloat {
    fn ln(&self) -> Self {
        BigFloat::ln(self)
    }

    fn exp(&self) -> Self {
        BigFloat::exp(self)
    }
}

fn render_bigfloat(x: &BigFloat) -> String {
    // bits * log10(2) digits, plus one so the text pins the binary value down
    let digits = (x.precision() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    let dec = x
        .clone()
        .with_base_and_precision::<10>(digits.max(1))
        .value();
    format!("{dec}")
}

impl Scalar for Rational {
    type Context = ();
    const EXACT: bool = true;

    fn from_rational(r: &Rational, _: &()) -> Self {
        r.clone()
    }

    fn ctx(&self) {}

    fn as_f64(&self) -> f64 {
        RBig::to_f64(self).value()
    }

    fn unit_roundoff(_: &()) -> f64 {
        0.0
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn is_zero(&self) -> bool {
        *self.numerator() == IBig::ZERO
    }

    fn solve_dense(a: &DenseMatrix<Self>, rhs: &[Self]) -> Result<Vec<Self>> {
        linalg::bareiss_solve(a, rhs)
    }
}

/// Parse a decimal (`-0.25`, `1e-3`) or rational (`p/q`) literal exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(AbelError::Parse(text.to_string()));
    }
    if t.contains('/') {
        let (p, q) = t.split_once('/').expect("checked");
        let p = IBig::from_str(p.trim()).map_err(|_| AbelError::Parse(text.to_string()))?;
        let q = IBig::from_str(q.trim()).map_err(|_| AbelError::Parse(text.to_string()))?;
        if q == IBig::ZERO {
            return Err(AbelError::Parse(text.to_string()));
        }
        return Ok(RBig::from_parts_signed(p, q));
    }
    RBig::from_str_decimal(t).map_err(|_| AbelError::Parse(text.to_string()))
}

/// Compare by absolute value.
pub fn abs_cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal)
}

/// Binomial coefficient C(n, k) by the multiplicative recurrence.
pub fn binomial(n: usize, k: usize) -> UBig {
    if k > n {
        return UBig::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = UBig::ONE;
    for i in 0..k {
        acc = acc * UBig::from(n - i) / UBig::from(i + 1);
    }
    acc
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: usize) -> Vec<UBig> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = UBig::ONE;
    row.push(c.clone());
    for k in 0..n {
        c = c * UBig::from(n - k) / UBig::from(k + 1);
        row.push(c.clone());
    }
    row
}

pub fn binomial_scalar<S: Scalar>(n: usize, k: usize, ctx: &S::Context) -> S {
    S::from_ibig(&IBig::from(binomial(n, k)), ctx)
}

/// Scalar arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "bits")]
pub enum Mode {
    MachineFloat,
    BigFloat(usize),
    ExactRational,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::MachineFloat => write!(f, "machine"),
            Mode::BigFloat(bits) => write!(f, "bits:{bits}"),
            Mode::ExactRational => write!(f, "exact"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    pub mode: Mode,
    pub guard_bits: usize,
}

impl PrecisionConfig {
    pub fn new(mode: Mode, guard_bits: usize) -> Result<Self> {
        if let Mode::BigFloat(bits) = mode {
            if bits < MIN_BITS {
                return Err(AbelError::Precision(format!(
                    "big-float mode needs at least {MIN_BITS} bits, got {bits}"
                )));
            }
        }
        Ok(Self { mode, guard_bits })
    }

    pub fn machine() -> Self {
        Self {
            mode: Mode::MachineFloat,
            guard_bits: DEFAULT_GUARD_BITS,
        }
    }

    pub fn exact() -> Self {
        Self {
            mode: Mode::ExactRational,
            guard_bits: DEFAULT_GUARD_BITS,
        }
    }

    pub fn bits(bits: usize) -> Result<Self> {
        Self::new(Mode::BigFloat(bits), DEFAULT_GUARD_BITS)
    }

    /// Big-float precision for an alternating binomial sum of degree `n`:
    /// at least `n + guard_bits`, never below the configured bit count.
    pub fn working_bits(&self, n: usize) -> usize {
        let base = match self.mode {
            Mode::BigFloat(bits) => bits,
            _ => 53,
        };
        base.max(n + self.guard_bits).max(MIN_BITS)
    }
}

impl FromStr for PrecisionConfig {
    type Err = AbelError;

    /// `machine`, `bits:<n>` or `exact`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "machine" => Ok(Self::machine()),
            "exact" => Ok(Self::exact()),
            other => match other.strip_prefix("bits:") {
                Some(n) => {
                    let bits = n
                        .parse::<usize>()
                        .map_err(|_| AbelError::Precision(other.to_string()))?;
                    Self::bits(bits)
                }
                None => Err(AbelError::Precision(other.to_string())),
            },
        }
    }
}
