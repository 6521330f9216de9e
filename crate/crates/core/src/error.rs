use thiserror::Error;

/// Errors raised by the series, matrix, solver and closed-form routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbelError {
    #[error("series centers differ ({left} vs {right}); recenter first")]
    MismatchedCenters { left: String, right: String },

    #[error("series order {have} is too small, need at least {need}")]
    InsufficientOrder { need: usize, have: usize },

    #[error("series development point must be 0, got {0}")]
    NonZeroCenter(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("singular system at N={n} (condition estimate {condition:e})")]
    Singular { n: usize, condition: f64 },

    #[error("base is a root of unity: b^{k} = 1")]
    RootOfUnity { k: usize },

    #[error("development point s must be nonzero")]
    ZeroDevelopmentPoint,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inversion bracket [{lo}, {hi}] does not enclose the target {target}")]
    Bracket { lo: f64, hi: f64, target: f64 },

    #[error("bisection did not reach tolerance {tolerance:e} (residual {residual:e})")]
    NoConvergence { tolerance: f64, residual: f64 },

    #[error("cannot parse number `{0}`")]
    Parse(String),

    #[error("invalid precision: {0}")]
    Precision(String),
}

impl AbelError {
    /// Mathematical domain failures, as opposed to malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            AbelError::Singular { .. }
                | AbelError::RootOfUnity { .. }
                | AbelError::ZeroDevelopmentPoint
                | AbelError::Domain(_)
                | AbelError::Bracket { .. }
                | AbelError::NoConvergence { .. }
        )
    }
}

pub type Result<T, E = AbelError> = std::result::Result<T, E>;
