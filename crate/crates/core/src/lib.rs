//! Intuitive Abel functions.
//!
//! For an analytic map `f`, the coefficients of an Abel function
//! `alpha(f(x)) = alpha(x) + 1` solve an infinite linear system built from the
//! Bell matrix of `f`. This crate assembles and solves its `N x N` truncations
//! for growing `N` ([`carleman`], [`solver`]) and ships the closed forms for
//! the affine map `f(x) = bx` developed at `s != 0` ([`affine`]), where the
//! truncated solutions are polynomials approximating `log_b`.
//!
//! All algorithms are generic over [`Scalar`]: `f64`, [`BigFloat`] or exact
//! [`Rational`].

pub mod affine;
pub mod carleman;
pub mod error;
pub mod iterate;
pub mod linalg;
pub mod powerseries;
pub mod scalar;
pub mod solver;

pub use affine::{
    beta_direct, beta_direct_vector, beta_polynomial, beta_recurrence, binom_tail,
    convergence_table, eval_log_poly, exploratory_table, log_poly, onpow_identity, remainder,
    remainder_bound, s_invariance_gap, AffineParams, BinomTail, ConvergenceRow, InvarianceGap,
    LogApproxPoly,
};
pub use carleman::{abel_system, bell_matrix, AbelSystem, BellMatrix};
pub use error::{AbelError, Result};
pub use iterate::{fractional_iterate, semigroup_check, AbelEvaluator, IterationContext};
pub use linalg::DenseMatrix;
pub use powerseries::{recenter, series_mul, series_pow, SeriesFile, TruncatedSeries};
pub use scalar::{
    parse_rational, BigFloat, Mode, PrecisionConfig, Rational, RealScalar, Scalar,
    DEFAULT_GUARD_BITS,
};
pub use solver::{
    abel_residual, intuitive_sweep, solution_series, solve_truncated, Stabilization, SweepReport,
    Trajectory, Verdict,
};
