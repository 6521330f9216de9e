use std::path::{Path, PathBuf};

use serde_json::{json, Map as JsonMap, Value};
use thiserror::Error;

use intuitive_abel::affine::{convergence_table, exploratory_table, ConvergenceRow};
use intuitive_abel::carleman::{abel_system_from_bell, matrix_csv, system_csv};
use intuitive_abel::powerseries::{exp_conjugate_series, exp_series};
use intuitive_abel::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Abel(#[from] AbelError),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for mathematical domain failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Abel(e) if e.is_domain() => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A command result in both output encodings.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub csv: String,
}

/// Run `$f::<S>(&ctx, args..)` for the scalar type selected by `$cfg`.
macro_rules! dispatch {
    ($cfg:expr, $bits:expr, $f:ident($($arg:expr),*)) => {
        match $cfg.mode {
            Mode::MachineFloat => $f::<f64>(&(), $($arg),*),
            Mode::BigFloat(_) => $f::<BigFloat>(&$bits, $($arg),*),
            Mode::ExactRational => $f::<Rational>(&(), $($arg),*),
        }
    };
}

/// As `dispatch!`, for jobs that need logarithms.
macro_rules! dispatch_real {
    ($cfg:expr, $bits:expr, $what:expr, $f:ident($($arg:expr),*)) => {
        match $cfg.mode {
            Mode::MachineFloat => $f::<f64>(&(), $($arg),*),
            Mode::BigFloat(_) => $f::<BigFloat>(&$bits, $($arg),*),
            Mode::ExactRational => Err(CliError::Config(format!(
                "{} needs machine or bits:<n> precision",
                $what
            ))),
        }
    };
}

/// The map whose Abel function is sought.
#[derive(Debug, Clone)]
pub enum MapSpec {
    /// `g(x) = b(x+s) - s`
    Affine { b: Rational, s: Rational },
    /// A series at 0, optionally shift-conjugated by `s`.
    Series {
        f: TruncatedSeries<Rational>,
        shift: Option<Rational>,
    },
}

impl MapSpec {
    pub fn resolve(
        b: Option<Rational>,
        s: Option<Rational>,
        series: Option<&Path>,
    ) -> CliResult<Self> {
        if let Some(path) = series {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let f = SeriesFile::parse(&text)?;
            if !f.center().is_zero() {
                return Err(AbelError::NonZeroCenter(f.center().render()).into());
            }
            return Ok(MapSpec::Series { f, shift: s });
        }
        match (b, s) {
            (Some(b), Some(s)) => Ok(MapSpec::Affine { b, s }),
            _ => Err(CliError::Config(
                "give --b and --s for the affine map, or --series <file>".into(),
            )),
        }
    }

    fn series<S: Scalar>(&self, order: usize, ctx: &S::Context) -> CliResult<TruncatedSeries<S>> {
        match self {
            MapSpec::Affine { b, s } => {
                let p = AffineParams::new(S::from_rational(b, ctx), S::from_rational(s, ctx))?;
                Ok(p.map_series(order))
            }
            MapSpec::Series { f, shift } => {
                let g = match shift {
                    Some(s) => f.recenter(s),
                    None => f.clone(),
                };
                Ok(g.to_scalar(ctx))
            }
        }
    }

    /// Affine maps must avoid `s = 0` and roots of unity up to order `n`.
    fn check<S: Scalar>(&self, n: usize, ctx: &S::Context) -> CliResult<()> {
        if let MapSpec::Affine { b, s } = self {
            AffineParams::new(S::from_rational(b, ctx), S::from_rational(s, ctx))?
                .check_order(n)?;
        }
        Ok(())
    }
}

fn json_row<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn json_rows<S: Scalar>(m: &DenseMatrix<S>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| json_row(r)).collect())
}

fn precision_json(cfg: &PrecisionConfig, bits: Option<usize>) -> Value {
    let mut v = json!({ "mode": cfg.mode.to_string(), "guard_bits": cfg.guard_bits });
    if let (Mode::BigFloat(_), Some(bits)) = (cfg.mode, bits) {
        v["working_bits"] = json!(bits);
    }
    v
}

fn max_abs<S: Scalar>(v: impl IntoIterator<Item = S>) -> f64 {
    v.into_iter().map(|x| x.as_f64().abs()).fold(0.0, f64::max)
}

// matrix

pub fn matrix(map: &MapSpec, n: usize, system: bool, cfg: &PrecisionConfig) -> CliResult<Report> {
    let bits = cfg.working_bits(n);
    dispatch!(cfg, bits, matrix_job(map, n, system, cfg, bits))
}

fn matrix_job<S: Scalar>(
    ctx: &S::Context,
    map: &MapSpec,
    n: usize,
    system: bool,
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let f = map.series::<S>(n, ctx)?;
    let bell = bell_matrix(&f, n)?;
    let precision = precision_json(cfg, Some(bits));
    if system {
        let sys = abel_system_from_bell(&bell);
        Ok(Report {
            json: json!({
                "N": n,
                "precision": precision,
                "matrix": json_rows(&sys.matrix),
                "rhs": json_row(&sys.rhs),
            }),
            csv: system_csv(&sys),
        })
    } else {
        // the square block B|_N, columns f^0 .. f^(N-1)
        let square = DenseMatrix::from_rows(
            bell.entries()
                .to_rows()
                .into_iter()
                .map(|mut r| {
                    r.truncate(n);
                    r
                })
                .collect(),
        );
        Ok(Report {
            json: json!({ "N": n, "precision": precision, "bell": json_rows(&square) }),
            csv: matrix_csv(&square),
        })
    }
}

// solve

pub fn solve(map: &MapSpec, n: usize, cfg: &PrecisionConfig) -> CliResult<Report> {
    if n == 0 {
        return Err(CliError::Config("--N must be positive".into()));
    }
    let bits = cfg.working_bits(n);
    dispatch!(cfg, bits, solve_job(map, n, cfg, bits))
}

fn solve_job<S: Scalar>(
    ctx: &S::Context,
    map: &MapSpec,
    n: usize,
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    map.check::<S>(n, ctx)?;
    let f = map.series::<S>(n - 1, ctx)?;
    let x = solve_truncated(&abel_system(&f, n)?)?;
    let residual = abel_residual(&solution_series(&x)?, &f.truncate(n - 1), n - 1)?;
    let mut csv = String::from("index,alpha\n");
    for (i, v) in x.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", i + 1, v.render()));
    }
    Ok(Report {
        json: json!({
            "N": n,
            "precision": precision_json(cfg, Some(bits)),
            "alpha": json_row(&x),
            "residual_max": max_abs(residual.into_coeffs()),
        }),
        csv,
    })
}

// sweep and explore-exp

pub fn sweep(
    map: &MapSpec,
    ns: &[usize],
    stab: &Stabilization,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let max = ns.iter().copied().max().unwrap_or(0);
    let bits = cfg.working_bits(max);
    dispatch!(cfg, bits, sweep_job(map, ns, stab, cfg))
}

fn sweep_job<S: Scalar>(
    ctx: &S::Context,
    map: &MapSpec,
    ns: &[usize],
    stab: &Stabilization,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let max = ns.iter().copied().max().unwrap_or(0);
    map.check::<S>(max, ctx)?;
    let f = map.series::<S>(max.saturating_sub(1), ctx)?;
    sweep_report(&f, ns, stab, cfg)
}

fn sweep_report<S: Scalar>(
    f: &TruncatedSeries<S>,
    ns: &[usize],
    stab: &Stabilization,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let report = intuitive_sweep(f, ns, cfg, stab)?;
    let mut csv = String::from("index,verdict,limit");
    for n in &report.ns {
        csv.push_str(&format!(",N={n}"));
    }
    csv.push('\n');
    for (i, t) in report.trajectories.iter().enumerate() {
        let (kind, limit) = match &t.verdict {
            Verdict::Stabilized { limit, .. } => ("stabilized", limit.as_str()),
            Verdict::Drifting => ("drifting", ""),
            Verdict::Oscillating => ("oscillating", ""),
            Verdict::SingularAt { .. } => ("singular-at", ""),
        };
        csv.push_str(&format!("{},{kind},{limit}", i + 1));
        for v in &t.values {
            csv.push(',');
            if let Some(v) = v {
                csv.push_str(&v.render());
            }
        }
        csv.push('\n');
    }
    Ok(Report {
        json: report.to_json(),
        csv,
    })
}

/// Sweep `g(x) = e^(x+s) - s` over `N = 1..=n_max`.
pub fn explore_exp(
    n_max: usize,
    s: &Rational,
    stab: &Stabilization,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    if n_max == 0 {
        return Err(CliError::Config("--N must be positive".into()));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    if cfg.mode == Mode::ExactRational {
        if !s.is_zero() {
            return Err(CliError::Config(
                "exact e^x sweeps need s = 0 (e^s is irrational otherwise)".into(),
            ));
        }
        return sweep_report(&exp_series::<Rational>(n_max - 1, &()), &ns, stab, cfg);
    }
    let bits = cfg.working_bits(n_max);
    dispatch_real!(
        cfg,
        bits,
        "explore-exp",
        explore_exp_job(n_max, s, &ns, stab, cfg)
    )
}

fn explore_exp_job<S: RealScalar>(
    ctx: &S::Context,
    n_max: usize,
    s: &Rational,
    ns: &[usize],
    stab: &Stabilization,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let f = exp_conjugate_series(&S::from_rational(s, ctx), n_max - 1);
    sweep_report(&f, ns, stab, cfg)
}

// affine

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Recurrence,
    System,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Recurrence => "recurrence",
            Method::System => "system",
        }
    }
}

pub fn affine(
    b: &Rational,
    s: &Rational,
    n: usize,
    methods: &[Method],
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    if n == 0 {
        return Err(CliError::Config("--n must be positive".into()));
    }
    let bits = cfg.working_bits(n);
    dispatch!(cfg, bits, affine_job(b, s, n, methods, cfg, bits))
}

fn affine_job<S: Scalar>(
    ctx: &S::Context,
    b: &Rational,
    s: &Rational,
    n: usize,
    methods: &[Method],
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let p = AffineParams::new(S::from_rational(b, ctx), S::from_rational(s, ctx))?;
    let mut results: Vec<(Method, Vec<S>)> = Vec::new();
    for &m in methods {
        let v = match m {
            Method::Direct => beta_direct_vector(&p, n)?,
            Method::Recurrence => (1..=n)
                .map(|i| beta_recurrence(&p, n, i))
                .collect::<Result<Vec<_>>>()?,
            Method::System => {
                p.check_order(n)?;
                solve_truncated(&abel_system(&p.map_series(n - 1), n)?)?
            }
        };
        results.push((m, v));
    }

    let mut by_method = JsonMap::new();
    for (m, v) in &results {
        by_method.insert(m.name().to_string(), json_row(v));
    }
    let mut json = json!({
        "b": b.render(),
        "s": s.render(),
        "n": n,
        "precision": precision_json(cfg, Some(bits)),
        "methods": by_method,
    });
    if results.len() > 1 {
        let first = &results[0].1;
        let diff = results[1..]
            .iter()
            .flat_map(|(_, v)| v.iter().zip(first).map(|(a, b)| a.clone() - b.clone()))
            .map(|d| d.as_f64().abs())
            .fold(0.0, f64::max);
        json["max_abs_difference"] = json!(diff);
    }

    let mut csv = String::from("m");
    for (m, _) in &results {
        csv.push(',');
        csv.push_str(m.name());
    }
    csv.push('\n');
    for i in 0..n {
        csv.push_str(&(i + 1).to_string());
        for (_, v) in &results {
            csv.push(',');
            csv.push_str(&v[i].render());
        }
        csv.push('\n');
    }
    Ok(Report { json, csv })
}

// affine diagnostics

/// `beta^(n)(g(z)) - beta^(n)(z) - 1` for n = 1..=n_max against its single
/// surviving term `(-1)^(n+1) (z/s)^n`.
pub fn residual_table(
    b: &Rational,
    s: &Rational,
    n_max: usize,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let bits = cfg.working_bits(n_max);
    dispatch!(cfg, bits, residual_job(b, s, n_max, cfg, bits))
}

fn residual_job<S: Scalar>(
    ctx: &S::Context,
    b: &Rational,
    s: &Rational,
    n_max: usize,
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let p = AffineParams::new(S::from_rational(b, ctx), S::from_rational(s, ctx))?;
    let mut rows = Vec::new();
    let mut csv = String::from("n,residual_top,expected,max_abs_deviation\n");
    for n in 1..=n_max {
        let beta = beta_polynomial(&p, n)?;
        let r = abel_residual(&beta, &p.map_series(n), n)?;
        let sign = S::from_int(if n % 2 == 1 { 1 } else { -1 }, ctx);
        let expected = sign / p.s().powu(n);
        let deviation = max_abs(r.coeffs().iter().enumerate().map(|(i, c)| {
            if i == n {
                c.clone() - expected.clone()
            } else {
                c.clone()
            }
        }));
        let top = r.coeff(n);
        csv.push_str(&format!(
            "{n},{},{},{deviation:e}\n",
            top.render(),
            expected.render()
        ));
        rows.push(json!({
            "n": n,
            "residual_top": top.render(),
            "expected": expected.render(),
            "max_abs_deviation": deviation,
        }));
    }
    let json = json!({
        "b": b.render(),
        "s": s.render(),
        "precision": precision_json(cfg, Some(bits)),
        "rows": rows,
    });
    Ok(Report { json, csv })
}

/// `R^(n)_j`, `R^(j)_n` and `d_{j,n}` for n, j in 0..=n_max.
pub fn remainder_table(b: &Rational, n_max: usize, cfg: &PrecisionConfig) -> CliResult<Report> {
    let bits = cfg.working_bits(2 * n_max);
    dispatch!(cfg, bits, remainder_job(b, n_max, cfg, bits))
}

fn remainder_job<S: Scalar>(
    ctx: &S::Context,
    b: &Rational,
    n_max: usize,
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let bs = S::from_rational(b, ctx);
    let mut csv = String::from("n,j,remainder,transposed,bound\n");
    let mut rows = Vec::new();
    let mut asymmetry = 0.0f64;
    let mut increases = Vec::new();
    for n in 0..=n_max {
        for j in 0..=n_max {
            let r = remainder(n, j, &bs);
            let t = remainder(j, n, &bs);
            let d = remainder_bound(n, j, &bs);
            asymmetry = asymmetry.max((r.abs() - t.abs()).as_f64().abs());
            if n > 0 && d > remainder_bound(n - 1, j, &bs) {
                increases.push(json!({"j": j, "n": n}));
            }
            csv.push_str(&format!(
                "{n},{j},{},{},{}\n",
                r.render(),
                t.render(),
                d.render()
            ));
            rows.push(json!({
                "n": n,
                "j": j,
                "remainder": r.render(),
                "transposed": t.render(),
                "bound": d.render(),
            }));
        }
    }
    let json = json!({
        "b": b.render(),
        "precision": precision_json(cfg, Some(bits)),
        "max_abs_asymmetry": asymmetry,
        "bound_increases": increases,
        "rows": rows,
    });
    Ok(Report { json, csv })
}

/// Partial sums `sum_{j=1}^J |C(x, j+1)|` against their limit `1 - x`.
pub fn binomial_tail_table(
    xs: &[Rational],
    terms: &[usize],
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let bits = cfg.working_bits(0);
    dispatch_real!(
        cfg,
        bits,
        "the binomial tail",
        binomial_tail_job(xs, terms, cfg, bits)
    )
}

fn binomial_tail_job<S: RealScalar>(
    ctx: &S::Context,
    xs: &[Rational],
    terms: &[usize],
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let mut csv = String::from("x,J,partial,limit,gap,tail_bound\n");
    let mut rows = Vec::new();
    for x in xs {
        let xv = S::from_rational(x, ctx);
        let limit = xv.one_like() - xv.clone();
        for &j in terms {
            let tail = binom_tail(&xv, j)?;
            let gap = limit.clone() - tail.partial.clone();
            csv.push_str(&format!(
                "{},{j},{},{},{},{:e}\n",
                x.render(),
                tail.partial.render(),
                limit.render(),
                gap.render(),
                tail.tail_bound
            ));
            rows.push(json!({
                "x": x.render(),
                "J": j,
                "partial": tail.partial.render(),
                "limit": limit.render(),
                "gap": gap.render(),
                "tail_bound": tail.tail_bound,
            }));
        }
    }
    let json = json!({
        "precision": precision_json(cfg, Some(bits)),
        "rows": rows,
    });
    Ok(Report { json, csv })
}

// logapprox and explore-bgt1

pub fn logapprox(
    b: &Rational,
    ns: &[usize],
    xs: &[Rational],
    exploratory: bool,
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let zero = Rational::from(0);
    let one = Rational::from(1);
    let rows = if exploratory {
        exploratory_table(b, ns, xs, cfg)?
    } else {
        if *b <= zero || *b >= one {
            return Err(AbelError::Domain(format!(
                "convergence tables need 0 < b < 1 (got {b}); b > 1 is available with --exploratory"
            ))
            .into());
        }
        convergence_table(b, ns, xs, cfg)?
    };
    let mut csv = String::from(ConvergenceRow::CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    Ok(Report {
        json: json!({
            "b": b.render(),
            "exploratory": exploratory,
            "precision": precision_json(cfg, None),
            "rows": rows,
        }),
        csv,
    })
}

// invariance

pub fn invariance(
    b: &Rational,
    s1: &Rational,
    s2: &Rational,
    n: usize,
    xs: &[Rational],
    cfg: &PrecisionConfig,
) -> CliResult<Report> {
    let bits = cfg.working_bits(n);
    dispatch!(cfg, bits, invariance_job(b, s1, s2, n, xs, cfg, bits))
}

#[allow(clippy::too_many_arguments)]
fn invariance_job<S: Scalar>(
    ctx: &S::Context,
    b: &Rational,
    s1: &Rational,
    s2: &Rational,
    n: usize,
    xs: &[Rational],
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let conv = |r: &Rational| S::from_rational(r, ctx);
    let p1 = AffineParams::new(conv(b), conv(s1))?;
    let p2 = AffineParams::new(conv(b), conv(s2))?;
    let xs: Vec<S> = xs.iter().map(conv).collect();
    let gap = s_invariance_gap(&p1, &p2, n, &xs)?;
    // L_n(x/s) -> log_b(x) - log_b(s)
    let zero = Rational::from(0);
    let expected = if *b > zero && *b != Rational::from(1) && *s1 > zero && *s2 > zero {
        let ln = |r: &Rational| Scalar::as_f64(r).ln();
        Some((ln(s2) - ln(s1)) / ln(b))
    } else {
        None
    };
    let expected_text = expected.map_or(String::new(), |e| format!("{e:?}"));
    Ok(Report {
        json: json!({
            "b": b.render(),
            "s1": s1.render(),
            "s2": s2.render(),
            "n": n,
            "precision": precision_json(cfg, Some(bits)),
            "deviation": gap.deviation,
            "median": gap.median,
            "expected_constant": expected,
        }),
        csv: format!(
            "deviation,median,expected_constant\n{:?},{:?},{expected_text}\n",
            gap.deviation, gap.median
        ),
    })
}

// iterate

#[derive(Debug, Clone)]
pub struct IterateArgs {
    pub b: Rational,
    pub s: Rational,
    /// Degree of the polynomial Abel function; `None` uses the exact logarithm.
    pub degree: Option<usize>,
    pub ts: Vec<Rational>,
    pub zs: Vec<Rational>,
    pub bracket: (Rational, Rational),
    pub tolerance: f64,
    pub semigroup: bool,
}

pub fn iterate(args: &IterateArgs, cfg: &PrecisionConfig) -> CliResult<Report> {
    if args.semigroup && args.ts.len() != 2 {
        return Err(CliError::Config(
            "--semigroup compares f^[s+t] with f^[s] o f^[t] and needs --t s,t".into(),
        ));
    }
    let bits = cfg.working_bits(args.degree.unwrap_or(0));
    dispatch_real!(cfg, bits, "iterate", iterate_job(args, cfg, bits))
}

fn iterate_job<S: RealScalar>(
    ctx: &S::Context,
    args: &IterateArgs,
    cfg: &PrecisionConfig,
    bits: usize,
) -> CliResult<Report> {
    let conv = |r: &Rational| S::from_rational(r, ctx);
    let bracket = (conv(&args.bracket.0), conv(&args.bracket.1));
    let it = match args.degree {
        Some(n) => {
            IterationContext::polynomial(conv(&args.b), conv(&args.s), n, bracket, args.tolerance)?
        }
        None => IterationContext::exact_log(conv(&args.b), conv(&args.s), bracket, args.tolerance)?,
    };
    let zs: Vec<S> = args.zs.iter().map(conv).collect();
    let precision = precision_json(cfg, Some(bits));

    if args.semigroup {
        let (s, t) = (conv(&args.ts[0]), conv(&args.ts[1]));
        let deviation = semigroup_check(&it, &s, &t, &zs)?;
        return Ok(Report {
            json: json!({
                "context": it.note(),
                "precision": precision,
                "s": args.ts[0].render(),
                "t": args.ts[1].render(),
                "z": args.zs.iter().map(|z| z.render()).collect::<Vec<_>>(),
                "deviation": deviation,
            }),
            csv: format!(
                "s,t,deviation\n{},{},{deviation:?}\n",
                args.ts[0].render(),
                args.ts[1].render()
            ),
        });
    }

    let mut rows = Vec::new();
    let mut csv = String::from("t,z,value\n");
    for t in &args.ts {
        let ts = conv(t);
        for (z, zs) in args.zs.iter().zip(&zs) {
            let v = fractional_iterate(&it, &ts, zs)?;
            csv.push_str(&format!("{},{},{}\n", t.render(), z.render(), v.render()));
            rows.push(json!({ "t": t.render(), "z": z.render(), "value": v.to_json() }));
        }
    }
    Ok(Report {
        json: json!({ "context": it.note(), "precision": precision, "rows": rows }),
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(AbelError::RootOfUnity { k: 1 }).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(AbelError::ZeroDevelopmentPoint).exit_code(),
            2
        );
        assert_eq!(CliError::from(AbelError::Parse("x".into())).exit_code(), 1);
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
    }

    #[test]
    fn affine_methods_agree_on_two_by_two() {
        let all = [Method::Direct, Method::Recurrence, Method::System];
        let r = affine(&q("2"), &q("1"), 2, &all, &PrecisionConfig::exact()).unwrap();
        for m in ["direct", "recurrence", "system"] {
            assert_eq!(r.json["methods"][m], json!(["4/3", "-1/3"]));
        }
        assert_eq!(r.json["max_abs_difference"], json!(0.0));
        assert_eq!(
            r.csv,
            "m,direct,recurrence,system\n1,4/3,4/3,4/3\n2,-1/3,-1/3,-1/3\n"
        );
    }

    #[test]
    fn solve_rejects_root_of_unity() {
        let map = MapSpec::Affine {
            b: q("1"),
            s: q("1"),
        };
        let e = solve(&map, 3, &PrecisionConfig::exact()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(matches!(e, CliError::Abel(AbelError::RootOfUnity { k: 1 })));
    }

    #[test]
    fn exact_iteration_is_a_config_error() {
        let args = IterateArgs {
            b: q("2"),
            s: q("1"),
            degree: None,
            ts: vec![q("1")],
            zs: vec![q("3")],
            bracket: (q("0.001"), q("1000")),
            tolerance: 1e-12,
            semigroup: false,
        };
        assert_eq!(
            iterate(&args, &PrecisionConfig::exact())
                .unwrap_err()
                .exit_code(),
            1
        );
        let r = iterate(&args, &PrecisionConfig::machine()).unwrap();
        let v = r.json["rows"][0]["value"].as_f64().unwrap();
        assert!((v - 6.0).abs() < 1e-9);
    }
}
