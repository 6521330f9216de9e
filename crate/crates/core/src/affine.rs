//! Closed forms for the shift-conjugated affine map `g(x) = b(x+s) - s = bx + d`
//! with `d = s(b-1)`.
//!
//! The truncated Abel system of `g` has the explicit solution
//!
//! ```text
//! beta^(n)_m = s^-m * sum_{k=m..n} C(n,k) C(k,m) (-1)^k / (1 - b^k)
//! ```
//!
//! which also satisfies a column recurrence in `n`. Substituting `x = s*y`
//! into `sum_m beta^(n)_m (x - s)^m` removes `s` and leaves the polynomial
//!
//! ```text
//! L_n(y) = sum_{k=1..n} C(n,k) (-1)^(k+1) (1 - y^k) / (1 - b^k)
//! ```
//!
//! which approximates `log_b(y)`. The remaining helpers measure how fast it
//! does so.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AbelError, Result};
use crate::linalg::DenseMatrix;
use crate::powerseries::TruncatedSeries;
use crate::scalar::{
    binomial_row, binomial_scalar, BigFloat, Mode, PrecisionConfig, Rational, RealScalar, Scalar,
};

/// Float modes treat `|b^k - 1|` below this as a root of unity.
pub const ROOT_OF_UNITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineParams<S> {
    b: S,
    s: S,
    d: S,
}

impl<S: Scalar> AffineParams<S> {
    pub fn new(b: S, s: S) -> Result<Self> {
        if s.is_zero() {
            return Err(AbelError::ZeroDevelopmentPoint);
        }
        let d = s.clone() * (b.clone() - b.one_like());
        Ok(Self { b, s, d })
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn s(&self) -> &S {
        &self.s
    }

    pub fn d(&self) -> &S {
        &self.d
    }

    /// Fail if `b^k = 1` for some `1 <= k <= n`.
    pub fn check_order(&self, n: usize) -> Result<()> {
        check_not_root_of_unity(&self.b, n)
    }

    /// `g` as a series at 0, padded to `order`.
    pub fn map_series(&self, order: usize) -> TruncatedSeries<S> {
        TruncatedSeries::affine(self.b.clone(), self.d.clone(), order)
    }

    /// `B_{m,n} = C(n,m) d^(n-m) b^m` for `0 <= m < size`, `0 <= n <= size`.
    pub fn bell_closed_form(&self, size: usize) -> DenseMatrix<S> {
        let ctx = self.b.ctx();
        let mut out = DenseMatrix::filled(size, size + 1, S::zero(&ctx));
        for n in 0..=size {
            for m in 0..size.min(n + 1) {
                out[(m, n)] =
                    binomial_scalar::<S>(n, m, &ctx) * self.d.powu(n - m) * self.b.powu(m);
            }
        }
        out
    }
}

fn is_one<S: Scalar>(v: &S) -> bool {
    if S::EXACT {
        *v == v.one_like()
    } else {
        (v.clone() - v.one_like()).as_f64().abs() < ROOT_OF_UNITY_TOL
    }
}

pub fn check_not_root_of_unity<S: Scalar>(b: &S, n: usize) -> Result<()> {
    let mut p = b.one_like();
    for k in 1..=n {
        p = p * b.clone();
        if is_one(&p) {
            return Err(AbelError::RootOfUnity { k });
        }
    }
    Ok(())
}

fn check_indices(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(AbelError::Domain(format!(
            "coefficient index must satisfy 1 <= m <= n (m={m}, n={n})"
        )));
    }
    Ok(())
}

/// `1/(1 - b^k)` for `k = 0..=n` (entry 0 unused and left at zero).
fn reciprocal_denominators<S: Scalar>(b: &S, n: usize) -> Vec<S> {
    let one = b.one_like();
    let mut out = vec![b.zero_like()];
    let mut p = one.clone();
    for _ in 1..=n {
        p = p * b.clone();
        out.push(one.clone() / (one.clone() - p.clone()));
    }
    out
}

/// `beta^(n)_m` from the column recurrence
/// `s^m beta^(k)_m = (I_{m,k}(-1)^m + sum_{j=m}^{k-1} s^m beta^(j)_m C(k,j)(1-b)^(k-j) b^j) / (1-b^k)`.
pub fn beta_recurrence<S: Scalar>(p: &AffineParams<S>, n: usize, m: usize) -> Result<S> {
    Ok(beta_recurrence_column(p, n, m)?
        .pop()
        .expect("column holds n - m + 1 entries"))
}

/// `beta^(k)_m` for `k = m..=n`, sharing the memo of scaled values.
pub fn beta_recurrence_column<S: Scalar>(
    p: &AffineParams<S>,
    n: usize,
    m: usize,
) -> Result<Vec<S>> {
    check_indices(n, m)?;
    p.check_order(n)?;
    let b = &p.b;
    let one = b.one_like();
    let ctx = b.ctx();
    let inv = reciprocal_denominators(b, n);
    let b_pow: Vec<S> = (0..=n).map(|k| b.powu(k)).collect();
    let omb = one.clone() - b.clone();
    let omb_pow: Vec<S> = (0..=n).map(|k| omb.powu(k)).collect();

    let sign = if m.is_multiple_of(2) {
        one.clone()
    } else {
        -one.clone()
    };
    // scaled[k - m] = s^m beta^(k)_m
    let mut scaled = vec![sign * inv[m].clone()];
    for k in m + 1..=n {
        let row = binomial_row(k);
        let mut acc = S::zero(&ctx);
        for j in m..k {
            let c = S::from_ibig(&row[j].clone().into(), &ctx);
            acc = acc + scaled[j - m].clone() * c * omb_pow[k - j].clone() * b_pow[j].clone();
        }
        scaled.push(acc * inv[k].clone());
    }
    let s_m = p.s.powu(m);
    Ok(scaled.into_iter().map(|v| v / s_m.clone()).collect())
}

/// `beta^(n)_m = s^-m sum_{k=m}^{n} C(n,k) C(k,m) (-1)^k / (1 - b^k)`.
pub fn beta_direct<S: Scalar>(p: &AffineParams<S>, n: usize, m: usize) -> Result<S> {
    check_indices(n, m)?;
    p.check_order(n)?;
    let inv = reciprocal_denominators(&p.b, n);
    Ok(direct_term(p, n, m, &inv, &binomial_row(n)))
}

fn direct_term<S: Scalar>(
    p: &AffineParams<S>,
    n: usize,
    m: usize,
    inv: &[S],
    row_n: &[dashu_int::UBig],
) -> S {
    let ctx = p.b.ctx();
    let mut acc = S::zero(&ctx);
    for k in m..=n {
        let c = Rational::from(row_n[k].clone()) * Rational::from(crate::scalar::binomial(k, m));
        let term = S::from_rational(&c, &ctx) * inv[k].clone();
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc / p.s.powu(m)
}

/// `(beta^(n)_1, .., beta^(n)_n)`.
pub fn beta_direct_vector<S: Scalar>(p: &AffineParams<S>, n: usize) -> Result<Vec<S>> {
    if n == 0 {
        return Err(AbelError::Domain("degree must be positive".into()));
    }
    p.check_order(n)?;
    let inv = reciprocal_denominators(&p.b, n);
    let row = binomial_row(n);
    Ok((1..=n).map(|m| direct_term(p, n, m, &inv, &row)).collect())
}

/// `beta^(n)` as a series at 0 with zero constant term.
pub fn beta_polynomial<S: Scalar>(p: &AffineParams<S>, n: usize) -> Result<TruncatedSeries<S>> {
    let mut coeffs = vec![p.b.zero_like()];
    coeffs.extend(beta_direct_vector(p, n)?);
    TruncatedSeries::at_zero(coeffs)
}

/// `L_n(y)` in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LogApproxPoly<S> {
    n: usize,
    b: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> LogApproxPoly<S> {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &S {
        &self.b
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(self.b.zero_like(), |acc, c| acc * x.clone() + c.clone())
    }
}

pub fn log_poly<S: Scalar>(b: &S, n: usize) -> Result<LogApproxPoly<S>> {
    check_not_root_of_unity(b, n)?;
    let ctx = b.ctx();
    let inv = reciprocal_denominators(b, n);
    let row = binomial_row(n);
    let mut coeffs = vec![S::zero(&ctx); n + 1];
    for k in 1..=n {
        // w_k = C(n,k) (-1)^(k+1) / (1 - b^k); contributes w_k - w_k y^k
        let mut w = S::from_ibig(&row[k].clone().into(), &ctx) * inv[k].clone();
        if k % 2 == 0 {
            w = -w;
        }
        coeffs[0] = coeffs[0].clone() + w.clone();
        coeffs[k] = -w;
    }
    Ok(LogApproxPoly {
        n,
        b: b.clone(),
        coeffs,
    })
}

pub fn eval_log_poly<S: Scalar>(poly: &LogApproxPoly<S>, x: &S) -> S {
    poly.eval(x)
}

/// `L_n(x)` in big-float arithmetic at `cfg.working_bits(n)`.
pub fn log_approx_bigfloat(
    b: &Rational,
    n: usize,
    x: &Rational,
    cfg: &PrecisionConfig,
) -> Result<BigFloat> {
    let bits = cfg.working_bits(n);
    let poly = log_poly(&BigFloat::from_rational(b, &bits), n)?;
    Ok(poly.eval(&BigFloat::from_rational(x, &bits)))
}

/// `log_b(x)` through the big-float natural logarithm.
pub fn reference_log(b: &Rational, x: &Rational, bits: usize) -> Result<BigFloat> {
    let zero = Rational::from(0);
    if *x <= zero || *b <= zero || *b == Rational::from(1) {
        return Err(AbelError::Domain(format!(
            "log_b(x) needs x > 0 and 0 < b != 1 (b={b}, x={x})"
        )));
    }
    let xb = BigFloat::from_rational(x, &bits);
    let bb = BigFloat::from_rational(b, &bits);
    Ok(RealScalar::ln(&xb) / RealScalar::ln(&bb))
}

/// Both sides of `sum_{k=1}^n C(n,k)(-1)^(k+1) y^k = 1 - (1-y)^n`.
pub fn onpow_identity<S: Scalar>(n: usize, y: &S) -> (S, S) {
    let ctx = y.ctx();
    let row = binomial_row(n);
    let mut lhs = S::zero(&ctx);
    let mut yk = S::one(&ctx);
    for (k, c) in row.iter().enumerate().skip(1) {
        yk = yk * y.clone();
        let term = S::from_ibig(&c.clone().into(), &ctx) * yk.clone();
        lhs = if k % 2 == 1 { lhs + term } else { lhs - term };
    }
    let one = S::one(&ctx);
    let rhs = one.clone() - (one - y.clone()).powu(n);
    (lhs, rhs)
}

/// `R^(n)_j = sum_{i=0}^j C(j,i) (-1)^(j-i) (1 - b^i)^n`.
pub fn remainder<S: Scalar>(n: usize, j: usize, b: &S) -> S {
    let ctx = b.ctx();
    let one = S::one(&ctx);
    let row = binomial_row(j);
    let mut acc = S::zero(&ctx);
    let mut bi = one.clone();
    for (i, c) in row.iter().enumerate() {
        let term = S::from_ibig(&c.clone().into(), &ctx) * (one.clone() - bi.clone()).powu(n);
        acc = if (j - i).is_multiple_of(2) {
            acc + term
        } else {
            acc - term
        };
        bi = bi * b.clone();
    }
    acc
}

/// `d_{j,n} = sum_{i=0}^j C(j,i) |1 - b^i|^n`, an upper bound for `|R^(n)_j|`.
pub fn remainder_bound<S: Scalar>(n: usize, j: usize, b: &S) -> S {
    let ctx = b.ctx();
    let one = S::one(&ctx);
    let row = binomial_row(j);
    let mut acc = S::zero(&ctx);
    let mut bi = one.clone();
    for c in &row {
        acc =
            acc + S::from_ibig(&c.clone().into(), &ctx) * (one.clone() - bi.clone()).abs().powu(n);
        bi = bi * b.clone();
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomTail<S> {
    /// `sum_{j=1}^J |C(kappa, j+1)|`
    pub partial: S,
    /// Upper bound for the omitted terms `k >= J + 2`, from
    /// `|C(kappa,k)| <= e^(kappa^2 + kappa) / k^(1 + kappa)`.
    pub tail_bound: f64,
}

/// `e^(kappa^2 + kappa) / k^(1 + kappa)`.
pub fn binom_term_bound(kappa: f64, k: usize) -> f64 {
    (kappa * kappa + kappa).exp() / (k as f64).powf(1.0 + kappa)
}

/// Partial sums of `sum_j |C(kappa, j+1)|`, with generalized binomials built
/// by the falling-factorial recurrence `C(kappa,k) = C(kappa,k-1)(kappa-k+1)/k`.
pub fn binom_tail<S: Scalar>(kappa: &S, cutoff: usize) -> Result<BinomTail<S>> {
    if *kappa <= kappa.zero_like() {
        return Err(AbelError::Domain(format!(
            "kappa must be positive, got {}",
            kappa.render()
        )));
    }
    let ctx = kappa.ctx();
    let mut c = kappa.clone(); // C(kappa, 1)
    let mut partial = S::zero(&ctx);
    for k in 2..=cutoff + 1 {
        let km1 = S::from_int((k - 1) as i64, &ctx);
        c = c * (kappa.clone() - km1) / S::from_int(k as i64, &ctx);
        partial = partial + c.abs();
    }
    let kf = kappa.as_f64();
    let tail_bound = (kf * kf + kf).exp() * ((cutoff + 1) as f64).powf(-kf) / kf;
    Ok(BinomTail {
        partial,
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceGap {
    /// `max_x |gap(x) - median|`
    pub deviation: f64,
    pub median: f64,
}

/// Deviation from constancy of `x -> L_n(x/s1) - L_n(x/s2)` over `xs`.
pub fn s_invariance_gap<S: Scalar>(
    p1: &AffineParams<S>,
    p2: &AffineParams<S>,
    n: usize,
    xs: &[S],
) -> Result<InvarianceGap> {
    if p1.b != p2.b {
        return Err(AbelError::Domain(
            "both developments must share the base b".into(),
        ));
    }
    if xs.is_empty() {
        return Err(AbelError::Domain("empty grid".into()));
    }
    let poly = log_poly(&p1.b, n)?;
    let gaps: Vec<f64> = xs
        .par_iter()
        .map(|x| {
            let a = poly.eval(&(x.clone() / p1.s.clone()));
            let b = poly.eval(&(x.clone() / p2.s.clone()));
            (a - b).as_f64()
        })
        .collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let deviation = gaps.iter().map(|g| (g - median).abs()).fold(0.0, f64::max);
    Ok(InvarianceGap { deviation, median })
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub x: String,
    pub approx: String,
    pub reference_log: String,
    pub abs_error: f64,
}

impl ConvergenceRow {
    pub const CSV_HEADER: &'static str = "n,x,approx,reference_log,abs_error";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:e}",
            self.n, self.x, self.approx, self.reference_log, self.abs_error
        )
    }
}

/// `L_n(x)` against `log_b(x)` for every `(n, x)`, in the arithmetic chosen by
/// `cfg`. Big-float evaluation and the reference use `cfg.working_bits(n)`.
pub fn convergence_table(
    b: &Rational,
    ns: &[usize],
    xs: &[Rational],
    cfg: &PrecisionConfig,
) -> Result<Vec<ConvergenceRow>> {
    table_rows(b, ns, xs, cfg, |n| cfg.working_bits(n))
}

/// The same table for `b > 1` on `|x/b - 1| < 1`, where convergence is only
/// observed, not established. Terms reach `2 * 3^n` there, so `n` extra
/// bits are carried on top of `cfg.working_bits(n)`.
pub fn exploratory_table(
    b: &Rational,
    ns: &[usize],
    xs: &[Rational],
    cfg: &PrecisionConfig,
) -> Result<Vec<ConvergenceRow>> {
    let one = Rational::from(1);
    if *b <= one {
        return Err(AbelError::Domain(format!(
            "exploratory region needs b > 1, got {b}"
        )));
    }
    for x in xs {
        let r = x.clone() / b.clone() - one.clone();
        if r.clone().abs() >= one {
            return Err(AbelError::Domain(format!(
                "x={x} lies outside |x/b - 1| < 1 for b={b}"
            )));
        }
    }
    table_rows(b, ns, xs, cfg, |n| cfg.working_bits(n) + n)
}

fn table_rows(
    b: &Rational,
    ns: &[usize],
    xs: &[Rational],
    cfg: &PrecisionConfig,
    bits_for: impl Fn(usize) -> usize + Sync,
) -> Result<Vec<ConvergenceRow>> {
    let jobs: Vec<(usize, &Rational)> = ns
        .iter()
        .flat_map(|&n| xs.iter().map(move |x| (n, x)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, x)| {
            let bits = bits_for(n);
            let reference = reference_log(b, x, bits)?;
            let (approx, approx_bf) = match cfg.mode {
                Mode::MachineFloat => {
                    let poly = log_poly(&<f64 as Scalar>::from_rational(b, &()), n)?;
                    let v = poly.eval(&<f64 as Scalar>::from_rational(x, &()));
                    let exact = Rational::try_from(v)
                        .map_err(|_| AbelError::Domain(format!("non-finite approximation {v}")))?;
                    (v.render(), BigFloat::from_rational(&exact, &bits))
                }
                Mode::BigFloat(_) => {
                    let poly = log_poly(&BigFloat::from_rational(b, &bits), n)?;
                    let v = poly.eval(&BigFloat::from_rational(x, &bits));
                    (v.render(), v)
                }
                Mode::ExactRational => {
                    let v = log_poly(b, n)?.eval(x);
                    (v.render(), BigFloat::from_rational(&v, &bits))
                }
            };
            Ok(ConvergenceRow {
                n,
                x: x.render(),
                approx,
                reference_log: reference.render(),
                abs_error: Scalar::as_f64(&(approx_bf - reference)).abs(),
            })
        })
        .collect()
}
