//! Fractional iteration `f^[t](z) = alpha^-1(t + alpha(z))` for `f(x) = bx`,
//! with `alpha` either the exact `log_b(x) - log_b(s)` or the degree-n
//! approximation `x -> L_n(x/s)`. The inverse is found by bisection.

use rayon::prelude::*;

use crate::affine::{log_poly, LogApproxPoly};
use crate::error::{AbelError, Result};
use crate::scalar::RealScalar;

/// Upper limit on bisection steps; each halves the bracket.
pub const MAX_BISECTIONS: usize = 2000;

#[derive(Debug, Clone)]
pub enum AbelEvaluator<S> {
    /// `(ln x - ln s) / ln b`
    ExactLog { ln_b: S, ln_s: S },
    /// `L_n(x / s)`
    Polynomial { poly: LogApproxPoly<S>, s: S },
}

impl<S: RealScalar> AbelEvaluator<S> {
    pub fn eval(&self, x: &S) -> Result<S> {
        match self {
            AbelEvaluator::ExactLog { ln_b, ln_s } => {
                if *x <= x.zero_like() {
                    return Err(AbelError::Domain(format!(
                        "log Abel function needs x > 0, got {}",
                        x.render()
                    )));
                }
                Ok((x.ln() - ln_s.clone()) / ln_b.clone())
            }
            AbelEvaluator::Polynomial { poly, s } => Ok(poly.eval(&(x.clone() / s.clone()))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IterationContext<S> {
    abel: AbelEvaluator<S>,
    lo: S,
    hi: S,
    tolerance: f64,
    note: String,
}

impl<S: RealScalar> IterationContext<S> {
    fn build(abel: AbelEvaluator<S>, lo: S, hi: S, tolerance: f64, note: String) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(AbelError::Domain(
                "inversion tolerance must be positive".into(),
            ));
        }
        if lo >= hi {
            return Err(AbelError::Domain(format!(
                "empty bracket [{}, {}]",
                lo.render(),
                hi.render()
            )));
        }
        Ok(Self {
            abel,
            lo,
            hi,
            tolerance,
            note,
        })
    }

    /// Exact Abel function of `f(x) = bx` normalized to vanish at `s`.
    pub fn exact_log(b: S, s: S, bracket: (S, S), tolerance: f64) -> Result<Self> {
        let zero = b.zero_like();
        if b <= zero || b == b.one_like() || s <= zero {
            return Err(AbelError::Domain(
                "exact log context needs b > 0, b != 1 and s > 0".into(),
            ));
        }
        let note = format!(
            "log_b(x) - log_b(s) with b={}, s={}; valid for x > 0 and all real t",
            b.render(),
            s.render()
        );
        let abel = AbelEvaluator::ExactLog {
            ln_b: b.ln(),
            ln_s: s.ln(),
        };
        Self::build(abel, bracket.0, bracket.1, tolerance, note)
    }

    /// Degree-`n` intuitive Abel polynomial developed at `s`, i.e. `beta^(n)(x - s)`.
    pub fn polynomial(b: S, s: S, n: usize, bracket: (S, S), tolerance: f64) -> Result<Self> {
        if s.is_zero() {
            return Err(AbelError::ZeroDevelopmentPoint);
        }
        let note = format!(
            "L_{n}(x/s) with b={}, s={}; monotone only where the polynomial tracks log_b",
            b.render(),
            s.render()
        );
        let abel = AbelEvaluator::Polynomial {
            poly: log_poly(&b, n)?,
            s,
        };
        Self::build(abel, bracket.0, bracket.1, tolerance, note)
    }

    pub fn abel(&self) -> &AbelEvaluator<S> {
        &self.abel
    }

    pub fn bracket(&self) -> (&S, &S) {
        (&self.lo, &self.hi)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Where the evaluator is meaningful.
    pub fn note(&self) -> &str {
        &self.note
    }

    /// `alpha^-1(target)` inside the bracket.
    pub fn invert(&self, target: &S) -> Result<S> {
        let residual = |x: &S| -> Result<S> { Ok(self.abel.eval(x)? - target.clone()) };
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let r_lo = residual(&lo)?;
        let r_hi = residual(&hi)?;
        if r_lo.as_f64().abs() <= self.tolerance {
            return Ok(lo);
        }
        if r_hi.as_f64().abs() <= self.tolerance {
            return Ok(hi);
        }
        let zero = target.zero_like();
        let lo_negative = r_lo < zero;
        if lo_negative == (r_hi < zero) {
            return Err(AbelError::Bracket {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
                target: target.as_f64(),
            });
        }
        let half = S::from_rational(
            &crate::scalar::Rational::from_parts(1.into(), 2u8.into()),
            &target.ctx(),
        );
        let mut best = (f64::INFINITY, lo.clone());
        for _ in 0..MAX_BISECTIONS {
            let mid = (lo.clone() + hi.clone()) * half.clone();
            if mid == lo || mid == hi {
                break;
            }
            let r = residual(&mid)?;
            let size = r.as_f64().abs();
            if size < best.0 {
                best = (size, mid.clone());
            }
            if size <= self.tolerance {
                return Ok(mid);
            }
            if (r < zero) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(AbelError::NoConvergence {
            tolerance: self.tolerance,
            residual: best.0,
        })
    }
}

/// `f^[t](z) = alpha^-1(t + alpha(z))`.
pub fn fractional_iterate<S: RealScalar>(ctx: &IterationContext<S>, t: &S, z: &S) -> Result<S> {
    let target = t.clone() + ctx.abel.eval(z)?;
    ctx.invert(&target)
}

/// `max_z |f^[s+t](z) - f^[s](f^[t](z))|`.
pub fn semigroup_check<S: RealScalar>(
    ctx: &IterationContext<S>,
    s: &S,
    t: &S,
    zs: &[S],
) -> Result<f64> {
    let devs: Vec<f64> = zs
        .par_iter()
        .map(|z| {
            let joint = fractional_iterate(ctx, &(s.clone() + t.clone()), z)?;
            let inner = fractional_iterate(ctx, t, z)?;
            let split = fractional_iterate(ctx, s, &inner)?;
            Ok((joint - split).as_f64().abs())
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_two() -> IterationContext<f64> {
        IterationContext::exact_log(2.0, 1.0, (1e-3, 1e3), 1e-13).unwrap()
    }

    #[test]
    fn unit_step_is_the_map() {
        let v = fractional_iterate(&exact_two(), &1.0, &3.0).unwrap();
        assert!((v - 6.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn half_step_is_sqrt_two() {
        let v = fractional_iterate(&exact_two(), &0.5, &1.0).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-11, "{v}");
    }

    #[test]
    fn integer_steps_compose() {
        let ctx = exact_two();
        for z in [0.1, 0.7, 2.5] {
            let mut direct = z;
            for m in 1..=5 {
                direct *= 2.0;
                let v = fractional_iterate(&ctx, &(m as f64), &z).unwrap();
                assert!((v - direct).abs() <= 1e-10 * direct, "m={m} z={z}");
            }
            let id = fractional_iterate(&ctx, &0.0, &z).unwrap();
            assert!((id - z).abs() < 1e-11);
        }
    }

    #[test]
    fn semigroup_exact_and_zero_steps() {
        let ctx = exact_two();
        let zs = [0.2, 0.9, 4.0];
        assert!(semigroup_check(&ctx, &0.3, &0.45, &zs).unwrap() < 1e-10);
        assert!(semigroup_check(&ctx, &0.0, &0.0, &zs).unwrap() < 1e-11);
    }

    #[test]
    fn bracket_failures() {
        let ctx = IterationContext::exact_log(2.0, 1.0, (1.0, 2.0), 1e-12).unwrap();
        assert!(matches!(
            fractional_iterate(&ctx, &5.0, &1.0),
            Err(AbelError::Bracket { .. })
        ));
        assert!(IterationContext::exact_log(2.0, 1.0, (2.0, 1.0), 1e-12).is_err());
        assert!(IterationContext::exact_log(2.0, 1.0, (1.0, 2.0), 0.0).is_err());
        assert!(IterationContext::exact_log(1.0, 1.0, (1.0, 2.0), 1e-9).is_err());
        assert!(IterationContext::polynomial(0.5, 0.0, 4, (0.1, 0.9), 1e-9).is_err());
    }

    #[test]
    fn polynomial_context_small_degree() {
        let ctx = IterationContext::polynomial(0.5f64, 1.0, 40, (0.05, 0.99), 1e-10).unwrap();
        let v = fractional_iterate(&ctx, &1.0, &0.6).unwrap();
        assert!((v - 0.3).abs() < 1e-3, "{v}");
        assert!(!ctx.note().is_empty());
    }
}
