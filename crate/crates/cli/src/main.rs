//! `abel`: truncated Abel systems, affine closed forms, logarithm
//! approximations and fractional iterates from the command line.

mod commands;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intuitive_abel::{Mode, PrecisionConfig, Rational, Stabilization, DEFAULT_GUARD_BITS};

use commands::{CliError, CliResult, IterateArgs, MapSpec, Method, Report};

#[derive(Parser, Debug)]
#[command(name = "abel", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic: machine, bits:<n> or exact. Defaults depend on the command.
    #[arg(long, global = true, value_parser = parse_mode)]
    precision: Option<Mode>,

    /// Extra bits carried above the degree for alternating binomial sums.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD_BITS)]
    guard_bits: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    /// beta^(n)_1..beta^(n)_n by each --method.
    Coefficients,
    /// beta^(n)(g(z)) - beta^(n)(z) - 1 for n = 1..=--n.
    Residual,
    /// R^(n)_j, R^(j)_n and d_{j,n} for n, j <= --n (needs only --b).
    Remainder,
    /// Partial sums of |C(x, j+1)| (needs neither --b nor --s).
    BinomialTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Recurrence,
    System,
    All,
}

/// The map: `g(x) = b(x+s) - s`, or a series file shift-conjugated by `--s`.
#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    b: Option<Rational>,

    #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
    s: Option<Rational>,

    /// JSON series `{"center": 0, "coeffs": [..]}`; numbers may be "p/q" strings.
    #[arg(long, conflicts_with = "b")]
    series: Option<PathBuf>,
}

impl MapArgs {
    fn resolve(&self) -> CliResult<MapSpec> {
        MapSpec::resolve(self.b.clone(), self.s.clone(), self.series.as_deref())
    }
}

#[derive(Args, Debug)]
struct StabArgs {
    /// Consecutive steps that must settle.
    #[arg(long, default_value_t = Stabilization::default().window)]
    window: usize,

    #[arg(long, default_value_t = Stabilization::default().tol_abs)]
    tol_abs: f64,

    #[arg(long, default_value_t = Stabilization::default().tol_rel)]
    tol_rel: f64,
}

impl StabArgs {
    fn get(&self) -> Stabilization {
        Stabilization {
            window: self.window,
            tol_abs: self.tol_abs,
            tol_rel: self.tol_rel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the square Bell matrix B|_N, or the Abel system A|_N with --system.
    Matrix {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N")]
        n: usize,
        /// Print A|_N with the right-hand side as a last column.
        #[arg(long)]
        system: bool,
    },
    /// Solve the N x N truncated Abel system.
    Solve {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N")]
        n: usize,
    },
    /// Solve every truncation in --N and classify coefficient trajectories.
    Sweep {
        #[command(flatten)]
        map: MapArgs,
        /// Sizes, e.g. 1:32 or 8,16,32,64.
        #[arg(long = "N", value_parser = parse::sizes)]
        ns: ::std::vec::Vec<usize>,
        #[command(flatten)]
        stab: StabArgs,
    },
    /// Coefficients beta^(n)_m of the affine map by closed form and by solving,
    /// or one of the diagnostic tables selected by --table.
    Affine {
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        b: Option<Rational>,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        s: Option<Rational>,
        /// Degree; the largest n (and j) for the residual and remainder tables.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Table::Coefficients)]
        table: Table,
        /// Binomial tail: exponents x of C(x, j+1).
        #[arg(long, value_parser = parse::grid, default_value = "0.25,0.5,0.75")]
        x: ::std::vec::Vec<Rational>,
        /// Binomial tail: numbers of terms J.
        #[arg(long, value_parser = parse::sizes, default_value = "10,100,1000,10000,100000,1000000")]
        terms: ::std::vec::Vec<usize>,
    },
    /// Convergence table of the log_b approximation for 0 < b < 1.
    Logapprox {
        #[arg(long, value_parser = parse::rational)]
        b: Rational,
        #[arg(long, value_parser = parse::sizes, default_value = "100,400")]
        n: ::std::vec::Vec<usize>,
        /// Points, e.g. 0.1,0.25 or 0.1:0.9:0.1.
        #[arg(long, value_parser = parse::grid, default_value = "0.1,0.25,0.5,0.75,0.9")]
        x: ::std::vec::Vec<Rational>,
        /// Allow b > 1 on |x/b - 1| < 1, where convergence is only observed.
        #[arg(long)]
        exploratory: bool,
    },
    /// Deviation from constancy of L_n(x/s1) - L_n(x/s2) over a grid.
    Invariance {
        #[arg(long, value_parser = parse::rational)]
        b: Rational,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        s1: Rational,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true)]
        s2: Rational,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, value_parser = parse::grid, default_value = "0.25:0.85:0.05")]
        x: ::std::vec::Vec<Rational>,
    },
    /// Fractional iterates f^[t](z) of f(x) = bx through an Abel function.
    Iterate {
        #[arg(long, value_parser = parse::rational)]
        b: Rational,
        #[arg(long, value_parser = parse::rational, default_value = "1")]
        s: Rational,
        /// Use the degree-n polynomial Abel function instead of log_b.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t: ::std::vec::Vec<Rational>,
        #[arg(long, value_parser = parse::grid)]
        z: ::std::vec::Vec<Rational>,
        /// Search interval for the inverse, lo,hi.
        #[arg(long, value_parser = parse::bracket, default_value = "0.05,0.999")]
        bracket: (Rational, Rational),
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Report max |f^[s+t](z) - f^[s](f^[t](z))| for --t s,t.
        #[arg(long)]
        semigroup: bool,
    },
    /// Sweep e^(x+s) - s over N = 1..=N (report only).
    ExploreExp {
        #[arg(long = "N", default_value_t = 24)]
        n: usize,
        #[arg(long, value_parser = parse::rational, allow_hyphen_values = true, default_value = "0")]
        s: Rational,
        #[command(flatten)]
        stab: StabArgs,
    },
    /// Errors of the log_b approximation for b > 1 on |x/b - 1| < 1 (report only).
    ExploreBgt1 {
        #[arg(long, value_parser = parse::rational, default_value = "2")]
        b: Rational,
        #[arg(long, value_parser = parse::sizes, default_value = "25,50,100,200")]
        n: ::std::vec::Vec<usize>,
        #[arg(long, value_parser = parse::grid, default_value = "0.5,1.5,2.5,3,3.5")]
        x: ::std::vec::Vec<Rational>,
    },
}

fn parse_mode(text: &str) -> Result<Mode, String> {
    text.parse::<PrecisionConfig>()
        .map(|c| c.mode)
        .map_err(|e| e.to_string())
}

impl Command {
    fn default_mode(&self) -> Mode {
        match self {
            Command::Affine {
                table: Table::BinomialTail,
                ..
            } => Mode::MachineFloat,
            Command::Matrix { .. } | Command::Solve { .. } | Command::Affine { .. } => {
                Mode::ExactRational
            }
            Command::ExploreExp { .. } => Mode::BigFloat(256),
            _ => Mode::BigFloat(128),
        }
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    let mode = cli.precision.unwrap_or_else(|| cli.command.default_mode());
    let cfg = PrecisionConfig::new(mode, cli.guard_bits)?;
    match &cli.command {
        Command::Matrix { map, n, system } => commands::matrix(&map.resolve()?, *n, *system, &cfg),
        Command::Solve { map, n } => commands::solve(&map.resolve()?, *n, &cfg),
        Command::Sweep { map, ns, stab } => commands::sweep(&map.resolve()?, ns, &stab.get(), &cfg),
        Command::Affine {
            b,
            s,
            n,
            method,
            table,
            x,
            terms,
        } => {
            let need = |v: &Option<Rational>, flag: &str| {
                v.clone().ok_or_else(|| {
                    CliError::Config(format!("--table {table:?} needs --{flag}").to_lowercase())
                })
            };
            let degree = || n.ok_or_else(|| CliError::Config("--n is required".into()));
            match table {
                Table::Coefficients => {
                    let methods = match method {
                        MethodArg::Direct => vec![Method::Direct],
                        MethodArg::Recurrence => vec![Method::Recurrence],
                        MethodArg::System => vec![Method::System],
                        MethodArg::All => vec![Method::Direct, Method::Recurrence, Method::System],
                    };
                    commands::affine(&need(b, "b")?, &need(s, "s")?, degree()?, &methods, &cfg)
                }
                Table::Residual => {
                    commands::residual_table(&need(b, "b")?, &need(s, "s")?, degree()?, &cfg)
                }
                Table::Remainder => commands::remainder_table(&need(b, "b")?, degree()?, &cfg),
                Table::BinomialTail => commands::binomial_tail_table(x, terms, &cfg),
            }
        }
        Command::Logapprox {
            b,
            n,
            x,
            exploratory,
        } => commands::logapprox(b, n, x, *exploratory, &cfg),
        Command::Invariance { b, s1, s2, n, x } => commands::invariance(b, s1, s2, *n, x, &cfg),
        Command::Iterate {
            b,
            s,
            n,
            t,
            z,
            bracket,
            tol,
            semigroup,
        } => commands::iterate(
            &IterateArgs {
                b: b.clone(),
                s: s.clone(),
                degree: *n,
                ts: t.clone(),
                zs: z.clone(),
                bracket: bracket.clone(),
                tolerance: *tol,
                semigroup: *semigroup,
            },
            &cfg,
        ),
        Command::ExploreExp { n, s, stab } => commands::explore_exp(*n, s, &stab.get(), &cfg),
        Command::ExploreBgt1 { b, n, x } => commands::logapprox(b, n, x, true, &cfg),
    }
}

fn emit(cli: &Cli, report: &Report) -> CliResult<()> {
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.csv.clone(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli).and_then(|r| emit(&cli, &r)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
