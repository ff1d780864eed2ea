//! Command-line front end: simulate the benchmark models, inspect direction
//! counts, select extreme directions locally or jointly with the threshold,
//! scan criterion values over a k grid, run Monte Carlo benchmarks, and
//! estimate tail indices.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on degenerate-data errors
//! (no usable exceedances or grid points).

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use config::ConfigMap;
use exdir::io::{self, Output, OutputFormat};
use exdir::{
    hill_estimator, rank_transform, run_benchmark, standardize_margins, BenchMode,
    BenchmarkConfig, Criterion, Error, GridSpec, ModelSpec, Result, SampleMatrix,
};

#[derive(Parser)]
#[command(name = "exdir", version, about = "Detects the directions in which multivariate data is jointly extreme")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one of the benchmark models and write the sample as CSV
    Simulate(SimulateArgs),
    /// Empirical direction counts among the k largest observations
    Directions(DirectionsArgs),
    /// Select the extreme directions with an information criterion
    Select(SelectArgs),
    /// Evaluate the global criterion over a grid of k values
    Scan(ScanArgs),
    /// Monte Carlo benchmark of the selectors against known ground truth
    Bench(BenchArgs),
    /// Hill tail-index estimate on the pooled positive entries
    Hill(HillArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Benchmark model: independent | dependent
    #[arg(long)]
    model: String,
    /// Dimension (required for independent; defaults to d1+2*d2+3*d3 for dependent)
    #[arg(long)]
    d: Option<usize>,
    /// Number of singleton Pareto coordinates (dependent model)
    #[arg(long, default_value_t = 0)]
    d1: usize,
    /// Number of coordinate pairs (dependent model)
    #[arg(long, default_value_t = 0)]
    d2: usize,
    /// Number of coordinate triples (dependent model)
    #[arg(long, default_value_t = 0)]
    d3: usize,
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelSpec> {
        match self.model.to_ascii_lowercase().as_str() {
            "independent" => {
                let d = self.d.ok_or_else(|| Error::InvalidParameter {
                    reason: "the independent model requires --d".into(),
                })?;
                Ok(ModelSpec::Independent { d })
            }
            "dependent" => {
                let used = self.d1 + 2 * self.d2 + 3 * self.d3;
                let d = self.d.unwrap_or(used);
                Ok(ModelSpec::Dependent { d1: self.d1, d2: self.d2, d3: self.d3, d })
            }
            other => Err(Error::InvalidParameter {
                reason: format!("unknown model '{other}' (expected independent or dependent)"),
            }),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Sample size
    #[arg(long)]
    n: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional path for the ground-truth directions as JSON
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

/// Options shared by the analysis commands that read a CSV matrix.
#[derive(Args)]
struct InputArgs {
    /// Input CSV (one observation per row, optional header row)
    #[arg(long)]
    input: PathBuf,
    /// Marginal preprocessing: none | power | rank
    #[arg(long)]
    preprocess: Option<String>,
    /// Fraction of the pooled entries used by the Hill estimator of the
    /// power transform
    #[arg(long)]
    hill_k_fraction: Option<f64>,
    /// Plain KEY=VALUE config file filling in unset options
    #[arg(long)]
    config: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self, cfg: &ConfigMap) -> Result<SampleMatrix> {
        let x = io::read_csv_matrix(&self.input)?;
        let mode = match cfg.fill(self.preprocess.clone(), "preprocess")? {
            None => Preprocess::None,
            Some(raw) => raw.parse()?,
        };
        let hill_fraction = cfg.fill(self.hill_k_fraction, "hill_k_fraction")?.unwrap_or(0.05);
        apply_preprocess(x, mode, hill_fraction)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Preprocess {
    None,
    Power,
    Rank,
}

impl FromStr for Preprocess {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Preprocess::None),
            "power" | "power_transform" => Ok(Preprocess::Power),
            "rank" | "rank_transform" => Ok(Preprocess::Rank),
            other => Err(Error::InvalidParameter {
                reason: format!("unknown preprocessing '{other}' (expected none, power or rank)"),
            }),
        }
    }
}

fn apply_preprocess(x: SampleMatrix, mode: Preprocess, hill_fraction: f64) -> Result<SampleMatrix> {
    match mode {
        Preprocess::None => Ok(x),
        Preprocess::Rank => Ok(rank_transform(&x)),
        Preprocess::Power => {
            if !(hill_fraction > 0.0 && hill_fraction < 1.0) {
                return Err(Error::InvalidParameter {
                    reason: format!("hill-k-fraction must be in (0,1), got {hill_fraction}"),
                });
            }
            // the Hill estimator runs on the pooled strictly positive entries
            let positives: Vec<f64> =
                x.entries().iter().copied().filter(|&v| v > 0.0).collect();
            if positives.len() < 2 {
                return Err(Error::DegenerateTail);
            }
            let k = ((positives.len() as f64 * hill_fraction).round() as usize)
                .clamp(1, positives.len() - 1);
            let alpha = hill_estimator(&positives, k)?;
            standardize_margins(&x, alpha)
        }
    }
}

#[derive(Args)]
struct DirectionsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Exceedance count k
    #[arg(long)]
    k: Option<usize>,
    /// k as a fraction of n (default 0.05 when neither --k nor --k-fraction given)
    #[arg(long)]
    k_fraction: Option<f64>,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Information criterion: aic | qaic | mseic | bicu | bicl
    #[arg(long)]
    criterion: Option<String>,
    /// Fixed exceedance count k (local mode)
    #[arg(long)]
    k: Option<usize>,
    /// k as a fraction of n (local mode, default 0.05)
    #[arg(long)]
    k_fraction: Option<f64>,
    /// Estimate k jointly with s over a grid (global mode)
    #[arg(long, default_value_t = false, conflicts_with_all = ["k", "k_fraction"])]
    global: bool,
    /// Grid for global mode: "lo:hi[:step]", comma list, or "default"
    #[arg(long)]
    grid: Option<String>,
    /// Output path for the selection JSON (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Information criterion: aic | qaic | mseic | bicu | bicl
    #[arg(long)]
    criterion: Option<String>,
    /// Grid: "lo:hi[:step]", comma list, or "default"
    #[arg(long)]
    grid: Option<String>,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of Monte Carlo replicates
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Comma-separated sample sizes, e.g. 5000,20000
    #[arg(long)]
    n: String,
    /// Comma-separated criteria (default: all five)
    #[arg(long)]
    criteria: Option<String>,
    /// Benchmark mode: local | global
    #[arg(long, default_value = "local")]
    mode: String,
    /// k as a fraction of n for local mode
    #[arg(long, default_value_t = 0.05)]
    k_fraction: f64,
    /// Grid for global mode: "lo:hi[:step]", comma list, or "default"
    #[arg(long)]
    grid: Option<String>,
    /// Base RNG seed; replicate r uses base_seed + r
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HillArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of upper order statistics
    #[arg(long)]
    k: Option<usize>,
    /// k as a fraction of the pooled positive entries (default 0.05)
    #[arg(long)]
    k_fraction: Option<f64>,
}

fn parse_grid(raw: &str) -> Result<GridSpec> {
    let raw = raw.trim();
    if raw.eq_ignore_ascii_case("default") {
        return Ok(GridSpec::Default);
    }
    let bad = |reason: String| Error::InvalidParameter { reason };
    if raw.contains(':') {
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad(format!("grid '{raw}' must be lo:hi or lo:hi:step")));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("grid bound '{s}' is not an integer")))
        };
        let lo = parse(parts[0])?;
        let hi = parse(parts[1])?;
        let step = if parts.len() == 3 { parse(parts[2])? } else { 1 };
        return Ok(GridSpec::Range { lo, hi, step });
    }
    let ks: Vec<usize> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("grid value '{s}' is not an integer")))
        })
        .collect::<Result<_>>()?;
    Ok(GridSpec::Explicit(ks))
}

fn resolve_k(n: usize, k: Option<usize>, k_fraction: Option<f64>) -> Result<usize> {
    if let (Some(_), Some(_)) = (k, k_fraction) {
        return Err(Error::InvalidParameter {
            reason: "--k and --k-fraction are mutually exclusive".into(),
        });
    }
    if let Some(k) = k {
        return Ok(k);
    }
    let fraction = k_fraction.unwrap_or(0.05);
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter {
            reason: format!("k-fraction must be in (0,1), got {fraction}"),
        });
    }
    Ok(((n as f64 * fraction).round() as usize).clamp(1, n.saturating_sub(1).max(1)))
}

fn resolve_format(cfg: &ConfigMap, flag: Option<String>, default: OutputFormat) -> Result<OutputFormat> {
    Ok(match cfg.fill(flag, "format")? {
        Some(raw) => raw.parse()?,
        None => default,
    })
}

fn resolve_criterion(cfg: &ConfigMap, flag: Option<String>) -> Result<Criterion> {
    cfg.fill(flag, "criterion")?
        .ok_or_else(|| Error::InvalidParameter {
            reason: "--criterion is required (aic, qaic, mseic, bicu or bicl)".into(),
        })?
        .parse()
}

fn parse_criteria_list(raw: &str) -> Result<Vec<Criterion>> {
    raw.split(',').map(|s| s.trim().parse()).collect()
}

fn parse_sizes(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| Error::InvalidParameter {
                reason: format!("sample size '{s}' is not an integer"),
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let model = args.model.resolve()?;
            let (x, truth) = model.sample(args.n, args.seed)?;
            io::write_output(&Output::Matrix(&x), OutputFormat::Csv, args.out.as_deref())?;
            if let Some(path) = &args.truth_out {
                std::fs::write(path, io::to_json(&truth)?)?;
            }
            Ok(())
        }
        Command::Directions(args) => {
            let cfg = ConfigMap::load(args.input.config.as_deref())?;
            let x = args.input.load(&cfg)?;
            let k = resolve_k(
                x.n(),
                cfg.fill(args.k, "k")?,
                cfg.fill(args.k_fraction, "k_fraction")?,
            )?;
            let counts = exdir::empirical_direction_counts(&x, k)?;
            let format = resolve_format(&cfg, args.format, OutputFormat::Csv)?;
            io::write_output(&Output::Counts(&counts), format, args.out.as_deref())
        }
        Command::Select(args) => {
            let cfg = ConfigMap::load(args.input.config.as_deref())?;
            let x = args.input.load(&cfg)?;
            let criterion = resolve_criterion(&cfg, args.criterion)?;
            let global = args.global
                || (args.k.is_none()
                    && args.k_fraction.is_none()
                    && cfg.get("mode").is_some_and(|m| m.eq_ignore_ascii_case("global")));
            let result = if global {
                let grid_spec = match cfg.fill(args.grid, "grid")? {
                    Some(raw) => parse_grid(&raw)?,
                    None => GridSpec::Default,
                };
                let grid = grid_spec.resolve(x.n(), x.d())?;
                exdir::select_joint(&x, &grid, criterion)?
            } else {
                let k = resolve_k(
                    x.n(),
                    cfg.fill(args.k, "k")?,
                    cfg.fill(args.k_fraction, "k_fraction")?,
                )?;
                exdir::select_local(&x, k, criterion)?
            };
            io::write_output(&Output::Selection(&result), OutputFormat::Json, args.out.as_deref())
        }
        Command::Scan(args) => {
            let cfg = ConfigMap::load(args.input.config.as_deref())?;
            let x = args.input.load(&cfg)?;
            let criterion = resolve_criterion(&cfg, args.criterion)?;
            let grid_spec = match cfg.fill(args.grid, "grid")? {
                Some(raw) => parse_grid(&raw)?,
                None => GridSpec::Default,
            };
            let grid = grid_spec.resolve(x.n(), x.d())?;
            let scan = exdir::scan(&x, &grid, criterion)?;
            let format = resolve_format(&cfg, args.format, OutputFormat::Csv)?;
            io::write_output(&Output::Scan(&scan), format, args.out.as_deref())
        }
        Command::Bench(args) => {
            let model = args.model.resolve()?;
            let criteria = match &args.criteria {
                Some(raw) => parse_criteria_list(raw)?,
                None => Criterion::ALL.to_vec(),
            };
            let mode = match args.mode.to_ascii_lowercase().as_str() {
                "local" => BenchMode::Local { k_fraction: args.k_fraction },
                "global" => BenchMode::Global {
                    grid: match &args.grid {
                        Some(raw) => parse_grid(raw)?,
                        None => GridSpec::Default,
                    },
                },
                other => {
                    return Err(Error::InvalidParameter {
                        reason: format!("unknown mode '{other}' (expected local or global)"),
                    })
                }
            };
            let config = BenchmarkConfig {
                model,
                reps: args.reps,
                sample_sizes: parse_sizes(&args.n)?,
                criteria,
                mode,
                base_seed: args.base_seed,
            };
            let rows = run_benchmark(&config)?;
            let cfg = ConfigMap::default();
            let format = resolve_format(&cfg, args.format, OutputFormat::Csv)?;
            io::write_output(&Output::Benchmark(&rows), format, args.out.as_deref())
        }
        Command::Hill(args) => {
            let cfg = ConfigMap::load(args.input.config.as_deref())?;
            let x = args.input.load(&cfg)?;
            let positives: Vec<f64> = x.entries().iter().copied().filter(|&v| v > 0.0).collect();
            if positives.len() < 2 {
                return Err(Error::DegenerateTail);
            }
            let k = match cfg.fill(args.k, "k")? {
                Some(k) => k,
                None => {
                    let fraction = cfg.fill(args.k_fraction, "k_fraction")?.unwrap_or(0.05);
                    ((positives.len() as f64 * fraction).round() as usize)
                        .clamp(1, positives.len() - 1)
                }
            };
            let alpha = hill_estimator(&positives, k)?;
            println!("{}", io::format_f64(alpha));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_degenerate() { 2 } else { 1 })
        }
    }
}
