//! Truncated Abel systems over increasing N and the per-coefficient
//! stabilization test used to recognise an intuitive solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::carleman::{abel_system, AbelSystem};
use crate::error::{AbelError, Result};
use crate::powerseries::TruncatedSeries;
use crate::scalar::{PrecisionConfig, Scalar};

/// Solve `A|_N x = u|_N`; `x[k]` is `alpha^(N)_{k+1}`.
pub fn solve_truncated<S: Scalar>(sys: &AbelSystem<S>) -> Result<Vec<S>> {
    S::solve_dense(&sys.matrix, &sys.rhs)
}

/// The solution vector as a series with `alpha_0 = 0`, order `N`.
pub fn solution_series<S: Scalar>(x: &[S]) -> Result<TruncatedSeries<S>> {
    let zero = x
        .first()
        .ok_or_else(|| AbelError::InvalidSeries("empty solution".into()))?
        .zero_like();
    let mut coeffs = Vec::with_capacity(x.len() + 1);
    coeffs.push(zero);
    coeffs.extend_from_slice(x);
    TruncatedSeries::at_zero(coeffs)
}

/// Coefficients of `alpha(f(x)) - alpha(x) - 1` up to degree `order`.
pub fn abel_residual<S: Scalar>(
    alpha: &TruncatedSeries<S>,
    f: &TruncatedSeries<S>,
    order: usize,
) -> Result<TruncatedSeries<S>> {
    for s in [alpha, f] {
        if !s.center().is_zero() {
            return Err(AbelError::NonZeroCenter(s.center().render()));
        }
    }
    let composed = alpha.compose(f, order)?;
    let one = TruncatedSeries::constant(alpha.center().one_like(), order);
    composed.sub(&alpha.truncate(order))?.sub(&one)
}

/// Thresholds for declaring a coefficient trajectory settled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stabilization {
    pub window: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl Default for Stabilization {
    fn default() -> Self {
        Self {
            window: 3,
            tol_abs: 1e-9,
            tol_rel: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Stabilized { limit: String, last_delta: f64 },
    Drifting,
    Oscillating,
    SingularAt { ns: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    /// One entry per swept N; `None` where N < index or the solve failed.
    pub values: Vec<Option<S>>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct SweepReport<S> {
    pub ns: Vec<usize>,
    /// `trajectories[i]` belongs to coefficient index `i + 1`.
    pub trajectories: Vec<Trajectory<S>>,
    /// Truncations whose system was singular, with the condition estimate.
    pub singular: Vec<(usize, f64)>,
    pub precision: PrecisionConfig,
    pub stabilization: Stabilization,
}

impl<S: Scalar> SweepReport<S> {
    pub fn trajectory(&self, index: usize) -> Option<&Trajectory<S>> {
        index.checked_sub(1).and_then(|i| self.trajectories.get(i))
    }

    pub fn to_json(&self) -> Value {
        let mut coefficients = Map::new();
        for (i, t) in self.trajectories.iter().enumerate() {
            let values: Vec<Value> = t
                .values
                .iter()
                .map(|v| v.as_ref().map_or(Value::Null, Scalar::to_json))
                .collect();
            coefficients.insert(
                (i + 1).to_string(),
                json!({ "values": values, "verdict": t.verdict }),
            );
        }
        let singular: Vec<Value> = self
            .singular
            .iter()
            .map(|(n, c)| json!({ "N": n, "condition": c }))
            .collect();
        json!({
            "Ns": self.ns,
            "coefficients": coefficients,
            "singular": singular,
            "config": {
                "precision": self.precision.mode.to_string(),
                "guard_bits": self.precision.guard_bits,
                "stabilization": self.stabilization,
            },
        })
    }
}

fn classify<S: Scalar>(
    values: &[Option<S>],
    singular_ns: &[usize],
    stab: &Stabilization,
) -> Verdict {
    let present: Vec<&S> = values.iter().flatten().collect();
    let w = stab.window.max(1);
    if present.len() < w + 1 {
        return if present.is_empty() || !singular_ns.is_empty() {
            Verdict::SingularAt {
                ns: singular_ns.to_vec(),
            }
        } else {
            Verdict::Drifting
        };
    }
    let deltas: Vec<f64> = present
        .windows(2)
        .map(|p| (p[1].clone() - p[0].clone()).as_f64())
        .collect();
    let last = present[present.len() - 1];
    let tail = &deltas[deltas.len() - w..];
    let bound = stab.tol_abs + stab.tol_rel * last.as_f64().abs();
    let worst = tail.iter().map(|d| d.abs()).fold(0.0, f64::max);
    if worst <= bound {
        return Verdict::Stabilized {
            limit: last.render(),
            last_delta: worst,
        };
    }
    let alternating = tail.windows(2).all(|p| p[0] * p[1] < 0.0);
    let non_decreasing = tail.windows(2).all(|p| p[1].abs() >= p[0].abs());
    if w >= 2 && alternating && non_decreasing {
        Verdict::Oscillating
    } else {
        Verdict::Drifting
    }
}

/// Solve every truncation in `ns`, then classify each coefficient index.
/// Singular truncations are recorded, not fatal.
pub fn intuitive_sweep<S: Scalar>(
    f: &TruncatedSeries<S>,
    ns: &[usize],
    precision: &PrecisionConfig,
    stab: &Stabilization,
) -> Result<SweepReport<S>> {
    if ns.is_empty() || ns.windows(2).any(|p| p[0] >= p[1]) || ns[0] == 0 {
        return Err(AbelError::Domain(
            "truncation sizes must be positive and strictly increasing".into(),
        ));
    }
    let max_n = *ns.last().expect("non-empty");
    if f.order() + 1 < max_n {
        return Err(AbelError::InsufficientOrder {
            need: max_n - 1,
            have: f.order(),
        });
    }

    let solved: Vec<Result<Vec<S>>> = ns
        .par_iter()
        .map(|&n| abel_system(f, n).and_then(|sys| solve_truncated(&sys)))
        .collect();

    let mut singular = Vec::new();
    let mut solutions = Vec::with_capacity(ns.len());
    for (&n, r) in ns.iter().zip(solved) {
        match r {
            Ok(x) => solutions.push(Some(x)),
            Err(AbelError::Singular { condition, .. }) => {
                singular.push((n, condition));
                solutions.push(None);
            }
            Err(e) => return Err(e),
        }
    }

    let trajectories = (1..=max_n)
        .map(|index| {
            let values: Vec<Option<S>> = ns
                .iter()
                .zip(&solutions)
                .map(|(&n, sol)| {
                    if n < index {
                        None
                    } else {
                        sol.as_ref().map(|x| x[index - 1].clone())
                    }
                })
                .collect();
            let singular_ns: Vec<usize> = singular
                .iter()
                .map(|&(n, _)| n)
                .filter(|&n| n >= index)
                .collect();
            let verdict = classify(&values, &singular_ns, stab);
            Trajectory { values, verdict }
        })
        .collect();

    Ok(SweepReport {
        ns: ns.to_vec(),
        trajectories,
        singular,
        precision: *precision,
        stabilization: *stab,
    })
}
