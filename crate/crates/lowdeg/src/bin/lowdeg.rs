//! Command-line front end: reproducible experiments over the library's
//! bounds, oracles, estimators, detection statistics, sweeps, and cumulant
//! tables.
//!
//! Conventions:
//! * data rows go to stdout (or `--output`); diagnostics go to stderr;
//! * exit code 0 on success, 1 on any error (bad flags, violated module
//!   preconditions), 2 when every computed bound row has its validity
//!   conditions violated (the values are still printed, flagged);
//! * a `--config` file holds `key=value` lines with the same keys as the
//!   long flags; explicit flags win over the file;
//! * `--jobs`/`LOWDEG_JOBS` bound the rayon worker count; row order is
//!   deterministic regardless.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lowdeg::cumulants::{rat_from_f64, BinaryKappa, CliqueW, GaussianKappa};
use lowdeg::detection;
use lowdeg::estimators::{self, EstimatorSpec};
use lowdeg::exact_oracle;
use lowdeg::lowdeg_bounds::{self, BoundReport, BoundStatus, ModelParams};
use lowdeg::models::{trivial_mmse, CliqueParams, SubgraphParams, SubmatrixParams};
use lowdeg::multigraph::{enumerate_rooted_connected_upto, GraphMode, Multigraph};
use lowdeg::output::{self, Format, Precision, RunMeta};
use lowdeg::{rat_f64, Rat};

#[derive(Parser, Debug)]
#[command(
    name = "lowdeg",
    version,
    about = "Low-degree polynomial estimation bounds for planted submatrix, \
             dense subgraph, and clique models",
    disable_help_subcommand = true,
    args_override_self = true
)]
struct Cli {
    /// Config file of key=value lines (same keys as the long flags);
    /// explicit flags override the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker thread count for sweeps and Monte Carlo (default:
    /// LOWDEG_JOBS env var, else all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Write rows to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Upper bounds on Corr²_{≤D} and the implied MMSE lower bounds.
    Bound(BoundArgs),
    /// Exact small-instance Corr/MMSE via the moment-matrix formula.
    Oracle(OracleArgs),
    /// Monte Carlo MSE of the threshold-polynomial estimators.
    Simulate(SimulateArgs),
    /// Detection experiments against mean- and covariance-corrected nulls.
    Detect(DetectArgs),
    /// Phase-plane sweep over λ = n^{-a}, ρ = n^{-b}.
    Sweep(SweepArgs),
    /// Tables of exact cumulant values per rooted-connected class.
    Cumulant(CumulantArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Model {
    Submatrix,
    Subgraph,
    Clique,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Submatrix => "submatrix",
            Model::Subgraph => "subgraph",
            Model::Clique => "clique",
        }
    }
}

#[derive(Args, Debug)]
struct ModelFlags {
    /// Which planted ensemble.
    #[arg(long, value_enum)]
    model: Model,
    /// Number of vertices / matrix dimension (accepts 1e6 notation).
    #[arg(long, value_parser = parse_usize_sci)]
    n: usize,
    /// Signal-to-noise ratio λ (submatrix model; fractions accepted).
    #[arg(long, value_parser = parse_f64_frac)]
    lambda: Option<f64>,
    /// Planting probability ρ (fractions accepted).
    #[arg(long, value_parser = parse_f64_frac)]
    rho: f64,
    /// Background edge probability (subgraph model; fractions accepted).
    #[arg(long, value_parser = parse_f64_frac)]
    q0: Option<f64>,
    /// Planted edge probability (subgraph model; fractions accepted).
    #[arg(long, value_parser = parse_f64_frac)]
    q1: Option<f64>,
}

impl ModelFlags {
    fn build(&self) -> Result<ModelParams, String> {
        match self.model {
            Model::Submatrix => {
                let lambda = self.lambda.ok_or("--lambda is required for --model submatrix")?;
                Ok(ModelParams::Submatrix(
                    SubmatrixParams::new(self.n, lambda, self.rho).map_err(|e| e.to_string())?,
                ))
            }
            Model::Subgraph => {
                let q0 = self.q0.ok_or("--q0 is required for --model subgraph")?;
                let q1 = self.q1.ok_or("--q1 is required for --model subgraph")?;
                Ok(ModelParams::Subgraph(
                    SubgraphParams::new(self.n, self.rho, q0, q1).map_err(|e| e.to_string())?,
                ))
            }
            Model::Clique => Ok(ModelParams::Clique(
                CliqueParams::new(self.n, self.rho).map_err(|e| e.to_string())?,
            )),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BoundMethodFlag {
    Closed,
    Enumerated,
    Sharp,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Degrees to evaluate, comma-separated (e.g. 1,2,5,10).
    #[arg(long = "D")]
    d: UsizeList,
    /// closed | enumerated | sharp.
    #[arg(long, value_enum, default_value = "closed")]
    method: BoundMethodFlag,
    /// Rate parameter r of the closed-form condition chain.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Include the per-term breakdown column.
    #[arg(long)]
    breakdown: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Polynomial degree D.
    #[arg(long = "D")]
    d: usize,
    /// Exact rational arithmetic (binary models only).
    #[arg(long)]
    exact: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EstimatorFlag {
    Constant,
    Diag,
    /// Model-appropriate one-step power iteration.
    Power,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// constant | diag | power (power picks the statistic matching --model).
    #[arg(long, value_enum)]
    estimator: EstimatorFlag,
    /// Requested degree (rounded down to the intrinsic odd degree 2k+1).
    #[arg(long = "D", default_value_t = 1)]
    d: usize,
    /// Value of the constant estimator (default: ρ, the optimal constant).
    #[arg(long)]
    value: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// If set, also evaluate the matching MSE-guarantee conditions at
    /// this rate parameter.
    #[arg(long)]
    r: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DetectStat {
    /// Σ_i (Σ_j Y_ij)² against the mean-corrected null.
    Degree2,
    /// Σ_i (Σ_j Y_ij)³ ratio in the covariance-corrected model.
    Degree3,
    /// Explicit series bound on the low-degree likelihood ratio.
    Ldlr,
    /// Null-normalized correlation of the disjoint-path polynomial.
    Paths,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[arg(long, value_enum, default_value = "degree2")]
    stat: DetectStat,
    #[arg(long, value_parser = parse_usize_sci)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    rho: f64,
    /// Threshold offset t (degree2: τ = n² + t√2·n^{3/2}).
    #[arg(long, default_value_t = 5.0)]
    t: f64,
    /// Degree D (ldlr and paths statistics).
    #[arg(long = "D", default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 4000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = parse_usize_sci)]
    n: usize,
    /// Grid of exponents a in λ = n^{-a}: start:step:end or comma list.
    #[arg(long)]
    a: Grid,
    /// Grid of exponents b in ρ = n^{-b}: start:step:end or comma list.
    #[arg(long)]
    b: Grid,
    /// Degrees, comma-separated.
    #[arg(long = "D")]
    d: UsizeList,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
}

#[derive(Args, Debug)]
struct CumulantArgs {
    /// Which cumulant family: submatrix κ, subgraph unscaled κ, clique w.
    #[arg(long, value_enum)]
    model: Model,
    /// Maximum edge count |α|.
    #[arg(long = "D")]
    d: usize,
    /// λ as a fraction p/q or decimal (submatrix).
    #[arg(long)]
    lambda: Option<String>,
    /// ρ as a fraction p/q or decimal.
    #[arg(long)]
    rho: String,
    /// q0 as a fraction or decimal (subgraph).
    #[arg(long)]
    q0: Option<String>,
    /// q1 as a fraction or decimal (subgraph).
    #[arg(long)]
    q1: Option<String>,
}

// ---------------------------------------------------------------------------
// value parsers

/// Comma-separated list of counts (scientific notation accepted).
#[derive(Debug, Clone)]
struct UsizeList(Vec<usize>);

impl std::str::FromStr for UsizeList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|p| parse_usize_sci(p.trim())).collect::<Result<_, _>>().map(UsizeList)
    }
}

/// Either `start:step:end` (inclusive) or a comma list of values.
#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

impl std::str::FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

/// `f64` that also accepts `p/q` fraction syntax.
fn parse_f64_frac(s: &str) -> Result<f64, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0.0 {
            return Err("zero denominator".into());
        }
        Ok(p / q)
    } else {
        s.parse().map_err(|_| format!("not a number: '{s}'"))
    }
}

fn parse_usize_sci(s: &str) -> Result<usize, String> {
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a count: '{s}'"))?;
    if f < 0.0 || f > 1e15 || (f - f.round()).abs() > 1e-6 * f.max(1.0) {
        return Err(format!("not a nonnegative integer: '{s}'"));
    }
    Ok(f.round() as usize)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let bad = |_| format!("bad grid component in '{s}'");
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be start:step:end, got '{s}'"));
        }
        let start: f64 = parts[0].parse().map_err(bad)?;
        let step: f64 = parts[1].parse().map_err(bad)?;
        let end: f64 = parts[2].parse().map_err(bad)?;
        if step <= 0.0 || end < start {
            return Err(format!("need step > 0 and end >= start in '{s}'"));
        }
        let mut grid = Vec::new();
        let count = ((end - start) / step + 1e-9).floor() as usize;
        for k in 0..=count {
            grid.push(start + step * k as f64);
        }
        Ok(grid)
    } else {
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(bad)).collect()
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        Ok(lowdeg::rat(p, q))
    } else {
        let f: f64 = s.parse().map_err(|_| format!("not a number: '{s}'"))?;
        Ok(rat_from_f64(f))
    }
}

// ---------------------------------------------------------------------------
// config-file merge

const SUBCOMMANDS: &[&str] = &["bound", "oracle", "simulate", "detect", "sweep", "cumulant"];

/// Read `key=value` lines and return them as `--key value` pairs.
fn config_as_args(path: &std::path::Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut args = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(format!("config line {} is not key=value: '{line}'", lineno + 1))?;
        args.push(format!("--{}", key.trim()));
        args.push(value.trim().to_string());
    }
    Ok(args)
}

/// Splice config-derived flags directly after the subcommand token so that
/// explicit flags, which come later, override them (clap's Set action is
/// last-wins).
fn merged_argv() -> Result<Vec<String>, String> {
    let argv: Vec<String> = std::env::args().collect();
    let mut config: Option<PathBuf> = None;
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == "--config" && i + 1 < argv.len() {
            config = Some(PathBuf::from(&argv[i + 1]));
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        }
        i += 1;
    }
    let Some(path) = config else { return Ok(argv) };
    let extra = config_as_args(&path)?;
    let sub_pos = argv.iter().position(|a| SUBCOMMANDS.contains(&a.as_str()));
    let Some(pos) = sub_pos else { return Ok(argv) };
    let mut merged = argv[..=pos].to_vec();
    merged.extend(extra);
    merged.extend(argv[pos + 1..].iter().cloned());
    Ok(merged)
}

// ---------------------------------------------------------------------------
// row types

#[derive(Serialize)]
struct BoundRow {
    model: &'static str,
    n: usize,
    lambda: Option<f64>,
    rho: f64,
    q0: Option<f64>,
    q1: Option<f64>,
    r: Option<f64>,
    #[serde(flatten)]
    report: BoundReport,
    trivial_mmse: f64,
}

#[derive(Serialize)]
struct OracleRow {
    model: &'static str,
    n: usize,
    d: usize,
    lambda: Option<f64>,
    rho: f64,
    q0: Option<f64>,
    q1: Option<f64>,
    basis_size: usize,
    corr_sq: f64,
    mmse: f64,
    /// Directly evaluated MSE of the optimizing polynomial (equals `mmse`
    /// up to solver tolerance).
    achieved_mse: f64,
    corr_sq_exact: Option<String>,
    mmse_exact: Option<String>,
}

#[derive(Serialize)]
struct SimulateRow {
    estimator: &'static str,
    model: &'static str,
    n: usize,
    lambda: Option<f64>,
    rho: f64,
    q0: Option<f64>,
    q1: Option<f64>,
    d_requested: usize,
    d_effective: usize,
    trials: u64,
    seed: u64,
    mse: f64,
    half_width: f64,
    trivial_mmse: f64,
    guarantee_mse_bound: Option<f64>,
    guarantee_holds: Option<bool>,
}

#[derive(Serialize)]
struct CumulantRow {
    model: &'static str,
    alpha: String,
    edges: usize,
    vertices: usize,
    aut: u64,
    value_exact: String,
    value: f64,
}

// ---------------------------------------------------------------------------
// dispatch

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let argv = match merged_argv() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let jobs = cli.jobs.or_else(|| {
        std::env::var("LOWDEG_JOBS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(j) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("warning: could not set worker count: {e}");
        }
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, String> {
    let format: Format = cli.format.parse().map_err(|e| format!("{e}"))?;
    match &cli.cmd {
        Cmd::Bound(args) => cmd_bound(cli, args, format),
        Cmd::Oracle(args) => cmd_oracle(cli, args, format),
        Cmd::Simulate(args) => cmd_simulate(cli, args, format),
        Cmd::Detect(args) => cmd_detect(cli, args, format),
        Cmd::Sweep(args) => cmd_sweep(cli, args, format),
        Cmd::Cumulant(args) => cmd_cumulant(cli, args, format),
    }
}

fn emit<T: Serialize>(
    cli: &Cli,
    rows: Vec<T>,
    format: Format,
    precision: Precision,
    seed: Option<u64>,
) -> Result<(), String> {
    let meta = RunMeta::new(precision, seed);
    let tagged = output::with_meta(rows, &meta);
    let render = output::render_rows(&tagged, format).map_err(|e| e.to_string())?;
    match &cli.output {
        Some(path) => std::fs::write(path, render)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(render.as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn model_echo(m: &ModelFlags) -> (Option<f64>, Option<f64>, Option<f64>) {
    match m.model {
        Model::Submatrix => (m.lambda, None, None),
        Model::Subgraph => (None, m.q0, m.q1),
        Model::Clique => (None, None, None),
    }
}

fn cmd_bound(cli: &Cli, args: &BoundArgs, format: Format) -> Result<i32, String> {
    if args.d.0.is_empty() {
        return Err("--D requires at least one degree".into());
    }
    let model = args.model.build()?;
    let (lambda, q0, q1) = model_echo(&args.model);
    let mut rows: Vec<BoundRow> = Vec::new();
    let precision = match args.method {
        BoundMethodFlag::Enumerated => Precision::Exact,
        _ => Precision::Float,
    };
    for &d in &args.d.0 {
        let reports: Vec<(BoundReport, Option<f64>)> = match (args.method, &model) {
            (BoundMethodFlag::Enumerated, m) => {
                vec![(lowdeg_bounds::corr_bound_enumerated(m, d).map_err(|e| e.to_string())?, None)]
            }
            (BoundMethodFlag::Closed, ModelParams::Submatrix(p)) => vec![(
                lowdeg_bounds::corr_bound_submatrix_closed(p, d, args.r)
                    .map_err(|e| e.to_string())?,
                Some(args.r),
            )],
            (BoundMethodFlag::Closed, ModelParams::Subgraph(p)) => vec![(
                lowdeg_bounds::corr_bound_subgraph_closed(p, d, args.r)
                    .map_err(|e| e.to_string())?,
                Some(args.r),
            )],
            (BoundMethodFlag::Closed, ModelParams::Clique(p)) => {
                vec![(lowdeg_bounds::corr_bound_clique(p, d).map_err(|e| e.to_string())?, None)]
            }
            (BoundMethodFlag::Sharp, ModelParams::Submatrix(p)) => {
                let (upper, lower) =
                    lowdeg_bounds::sharp_bounds(p, d, args.r).map_err(|e| e.to_string())?;
                vec![(upper, Some(args.r)), (lower, Some(args.r))]
            }
            (BoundMethodFlag::Sharp, _) => {
                return Err("--method sharp applies to --model submatrix only".into())
            }
        };
        for (mut report, r) in reports {
            if !args.breakdown {
                report.breakdown.clear();
            }
            rows.push(BoundRow {
                model: args.model.model.name(),
                n: args.model.n,
                lambda,
                rho: args.model.rho,
                q0,
                q1,
                r,
                trivial_mmse: trivial_mmse(args.model.rho),
                report,
            });
        }
    }
    let all_violated =
        !rows.is_empty() && rows.iter().all(|r| r.report.status == BoundStatus::ConditionsViolated);
    for row in &rows {
        for note in &row.report.notes {
            eprintln!("note (D={}): {note}", row.report.d);
        }
    }
    emit(cli, rows, format, precision, None)?;
    Ok(if all_violated { 2 } else { 0 })
}

fn cmd_oracle(cli: &Cli, args: &OracleArgs, format: Format) -> Result<i32, String> {
    let model = args.model.build()?;
    let (lambda, q0, q1) = model_echo(&args.model);
    let err = |e: lowdeg::Error| e.to_string();
    let row = match (&model, args.exact) {
        (ModelParams::Submatrix(_), true) => {
            return Err(
                "--exact applies to the binary models (subgraph, clique); the Gaussian \
                 oracle uses float moments"
                    .into(),
            )
        }
        (ModelParams::Submatrix(p), false) => {
            let sys = exact_oracle::build_moment_system_gaussian(p, args.d).map_err(err)?;
            let corr = exact_oracle::corr_exact(&sys).map_err(err)?;
            let (_, achieved) = exact_oracle::best_polynomial(&sys).map_err(err)?;
            OracleRow {
                model: "submatrix",
                n: p.n,
                d: args.d,
                lambda,
                rho: p.rho,
                q0,
                q1,
                basis_size: sys.basis.len(),
                corr_sq: corr * corr,
                mmse: exact_oracle::mmse_exact(&sys).map_err(err)?,
                achieved_mse: achieved,
                corr_sq_exact: None,
                mmse_exact: None,
            }
        }
        (_, exact) => {
            let sys = match &model {
                ModelParams::Subgraph(p) => {
                    exact_oracle::build_moment_system_binary(p, args.d).map_err(err)?
                }
                ModelParams::Clique(p) => {
                    exact_oracle::build_moment_system_clique(p, args.d).map_err(err)?
                }
                ModelParams::Submatrix(_) => unreachable!(),
            };
            if exact {
                let (f, corr_sq) = sys.solve_exact().map_err(err)?;
                let mmse = &sys.rho - &corr_sq;
                let achieved = sys.achieved_mse_exact(&f);
                OracleRow {
                    model: args.model.model.name(),
                    n: args.model.n,
                    d: args.d,
                    lambda,
                    rho: args.model.rho,
                    q0,
                    q1,
                    basis_size: sys.basis.len(),
                    corr_sq: rat_f64(&corr_sq),
                    mmse: rat_f64(&mmse),
                    achieved_mse: rat_f64(&achieved),
                    corr_sq_exact: Some(corr_sq.to_string()),
                    mmse_exact: Some(mmse.to_string()),
                }
            } else {
                let fsys = sys.to_float();
                let corr = exact_oracle::corr_exact(&fsys).map_err(err)?;
                let (_, achieved) = exact_oracle::best_polynomial(&fsys).map_err(err)?;
                OracleRow {
                    model: args.model.model.name(),
                    n: args.model.n,
                    d: args.d,
                    lambda,
                    rho: args.model.rho,
                    q0,
                    q1,
                    basis_size: fsys.basis.len(),
                    corr_sq: corr * corr,
                    mmse: exact_oracle::mmse_exact(&fsys).map_err(err)?,
                    achieved_mse: achieved,
                    corr_sq_exact: None,
                    mmse_exact: None,
                }
            }
        }
    };
    let precision = if args.exact { Precision::Exact } else { Precision::Float };
    emit(cli, vec![row], format, precision, None)?;
    Ok(0)
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs, format: Format) -> Result<i32, String> {
    let model = args.model.build()?;
    let (lambda, q0, q1) = model_echo(&args.model);
    let (spec, d_eff) = match args.estimator {
        EstimatorFlag::Constant => (
            EstimatorSpec::Constant { value: args.value.unwrap_or(args.model.rho) },
            0,
        ),
        EstimatorFlag::Diag => {
            if !matches!(model, ModelParams::Submatrix(_)) {
                return Err("--estimator diag applies to --model submatrix".into());
            }
            let (k, d_eff) = estimators::degree_to_k(args.d).map_err(|e| e.to_string())?;
            (EstimatorSpec::DiagThreshold { k }, d_eff)
        }
        EstimatorFlag::Power => {
            let (k, d_eff) = estimators::degree_to_k(args.d).map_err(|e| e.to_string())?;
            let spec = match model {
                ModelParams::Submatrix(_) => EstimatorSpec::PowerSubmatrix { k },
                ModelParams::Subgraph(_) => EstimatorSpec::PowerSubgraph { k },
                ModelParams::Clique(_) => EstimatorSpec::PowerClique { k },
            };
            (spec, d_eff)
        }
    };
    let res = estimators::monte_carlo_mse(&spec, &model, args.trials, args.seed)
        .map_err(|e| e.to_string())?;
    let (guarantee_mse_bound, guarantee_holds) = match args.r {
        Some(r) if !matches!(spec, EstimatorSpec::Constant { .. }) => {
            let g = estimators::guarantee_check(&spec, &model, r).map_err(|e| e.to_string())?;
            for c in &g.conditions {
                eprintln!(
                    "condition {}: lhs {} vs rhs {} -> {}",
                    c.name,
                    c.lhs,
                    c.rhs,
                    if c.holds { "holds" } else { "violated" }
                );
            }
            (Some(g.mse_bound), Some(g.all_hold))
        }
        _ => (None, None),
    };
    let row = SimulateRow {
        estimator: spec.name(),
        model: args.model.model.name(),
        n: args.model.n,
        lambda,
        rho: args.model.rho,
        q0,
        q1,
        d_requested: args.d,
        d_effective: d_eff,
        trials: args.trials,
        seed: args.seed,
        mse: res.estimate,
        half_width: res.half_width,
        trivial_mmse: trivial_mmse(args.model.rho),
        guarantee_mse_bound,
        guarantee_holds,
    };
    emit(cli, vec![row], format, Precision::Float, Some(args.seed))?;
    Ok(0)
}

fn cmd_detect(cli: &Cli, args: &DetectArgs, format: Format) -> Result<i32, String> {
    match args.stat {
        DetectStat::Degree2 => {
            let p = SubmatrixParams::new(args.n, args.lambda, args.rho)
                .map_err(|e| e.to_string())?;
            let rep = detection::run_detection_experiment(&p, args.t, args.trials, args.seed)
                .map_err(|e| e.to_string())?;
            if !rep.t_in_range {
                eprintln!(
                    "note: t = {} is outside the guaranteed range; error-rate ceilings \
                     are not certified at this point",
                    args.t
                );
            }
            emit(cli, vec![rep], format, Precision::Float, Some(args.seed))?;
        }
        DetectStat::Degree3 => {
            let p = SubmatrixParams::new(args.n, args.lambda, args.rho)
                .map_err(|e| e.to_string())?;
            let rep = detection::degree3_ratio(&p, args.trials, args.seed)
                .map_err(|e| e.to_string())?;
            if !rep.hypotheses_hold {
                eprintln!("note: parameter point is outside the statement's hypotheses");
            }
            emit(cli, vec![rep], format, Precision::Float, Some(args.seed))?;
        }
        DetectStat::Ldlr => {
            let rep = detection::ldlr_mean_corrected_bound(args.d, args.lambda, args.rho, args.n);
            if rep.diverging {
                eprintln!("note: series terms still growing at d = D (bound diverging)");
            }
            emit(cli, vec![rep], format, Precision::Float, None)?;
        }
        DetectStat::Paths => {
            let rep = detection::null_corr_path_value(args.n, args.d, args.lambda, args.rho)
                .map_err(|e| e.to_string())?;
            emit(cli, vec![rep], format, Precision::Float, None)?;
        }
    }
    Ok(0)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, format: Format) -> Result<i32, String> {
    if args.a.0.is_empty() || args.b.0.is_empty() || args.d.0.is_empty() {
        return Err("--a, --b, and --D must be nonempty".into());
    }
    let points = lowdeg_bounds::phase_sweep(args.n, &args.a.0, &args.b.0, &args.d.0, args.r)
        .map_err(|e| e.to_string())?;
    let all_violated = points.iter().all(|p| p.status == BoundStatus::ConditionsViolated);
    emit(cli, points, format, Precision::Float, None)?;
    Ok(if all_violated { 2 } else { 0 })
}

fn alpha_string(g: &Multigraph) -> String {
    g.edges()
        .iter()
        .map(|((u, v), m)| {
            if *m == 1 {
                format!("{u}-{v}")
            } else {
                format!("{u}-{v}x{m}")
            }
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_cumulant(cli: &Cli, args: &CumulantArgs, format: Format) -> Result<i32, String> {
    let rho = parse_rat(&args.rho)?;
    let mode = match args.model {
        Model::Submatrix => GraphMode::Multigraph,
        Model::Subgraph | Model::Clique => GraphMode::Simple,
    };
    let classes = enumerate_rooted_connected_upto(args.d, mode).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    let err = |e: lowdeg::Error| e.to_string();
    match args.model {
        Model::Submatrix => {
            let lambda =
                parse_rat(args.lambda.as_deref().ok_or("--lambda is required for submatrix")?)?;
            let mut table = GaussianKappa::new(rho);
            for class in &classes {
                let v = table.kappa(&class.canon, &lambda).map_err(err)?;
                rows.push(CumulantRow {
                    model: "submatrix",
                    alpha: alpha_string(&class.canon),
                    edges: class.edge_count,
                    vertices: class.vertex_count,
                    aut: class.aut,
                    value: rat_f64(&v),
                    value_exact: v.to_string(),
                });
            }
        }
        Model::Subgraph => {
            let q0 = parse_rat(args.q0.as_deref().ok_or("--q0 is required for subgraph")?)?;
            let q1 = parse_rat(args.q1.as_deref().ok_or("--q1 is required for subgraph")?)?;
            let mut table = BinaryKappa::new(rho, q0, q1);
            for class in &classes {
                let v = table.kappa_unscaled(&class.canon).map_err(err)?;
                rows.push(CumulantRow {
                    model: "subgraph",
                    alpha: alpha_string(&class.canon),
                    edges: class.edge_count,
                    vertices: class.vertex_count,
                    aut: class.aut,
                    value: rat_f64(&v),
                    value_exact: v.to_string(),
                });
            }
        }
        Model::Clique => {
            let mut table = CliqueW::new(rho);
            for class in &classes {
                let v = table.w(&class.canon).map_err(err)?;
                rows.push(CumulantRow {
                    model: "clique",
                    alpha: alpha_string(&class.canon),
                    edges: class.edge_count,
                    vertices: class.vertex_count,
                    aut: class.aut,
                    value: rat_f64(&v),
                    value_exact: v.to_string(),
                });
            }
        }
    }
    emit(cli, rows, format, Precision::Exact, None)?;
    Ok(0)
}
