//! The `splitlab` command line.
//!
//! Exit codes: 0 success or decided verdict, 2 usage/validation/parse error,
//! 3 clause budget exceeded, 4 I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cnf::{compute_stats, parse_dimacs, write_dimacs};
use crate::compare::{compare, CompareSpec};
use crate::gen::{generate, GenSpec};
use crate::model::{run, ModelParams, RMode};
use crate::scan::{fit_power_law, outcomes_to_csv, scan_k, scan_line, ScanOptions, DEFAULT_RESOLUTION};
use crate::split::{decide, EmpiricalTrajectoryPoint, OrderPolicy, ReductionConfig, Verdict, DEFAULT_CLAUSE_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "splitlab", version, about = "SPLIT elimination, its recursion model and the easy/hard transition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recursion model: single runs and critical-line scans
    #[command(subcommand)]
    Model(ModelCommand),
    /// Run SPLIT on a DIMACS file
    #[command(subcommand)]
    Split(SplitCommand),
    /// Generate a symmetric homogeneous k-SAT formula
    Gen(GenArgs),
    /// Compare SPLIT on generated formulas against the model
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// Iterate the recursion from (m0, n0, k0)
    Run(ModelRunArgs),
    /// Critical m_c over a range of n at fixed k
    Scan(ModelScanArgs),
    /// Critical m_c over a range of k at fixed n
    Kscan(ModelKscanArgs),
}

#[derive(Debug, Subcommand)]
enum SplitCommand {
    /// Decide satisfiability of a DIMACS CNF file
    Run(SplitRunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RModeArg {
    /// exponent k - 2
    K2,
    /// exponent n - 2
    N2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Fixed,
    MaxAppearance,
    MinProduct,
}

#[derive(Debug, Args)]
struct ModelFlags {
    /// Fraction of new clauses removed as redundant
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Filling ratio of removed clauses to new clauses
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "k2")]
    r_mode: RModeArg,
    #[arg(long, default_value_t = 1.0)]
    easy_threshold: f64,
    /// Hard bound is m0 * blowup_factor^n0
    #[arg(long, default_value_t = 2.0)]
    blowup_factor: f64,
}

impl ModelFlags {
    fn params(&self) -> Result<ModelParams, CliError> {
        let p = ModelParams {
            alpha: self.alpha,
            lambda: self.lambda,
            r_mode: match self.r_mode {
                RModeArg::K2 => RMode::FillingExponent,
                RModeArg::N2 => RMode::VariableExponent,
            },
            easy_threshold: self.easy_threshold,
            blowup_factor: self.blowup_factor,
        };
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Debug, Args)]
struct ModelRunArgs {
    #[arg(long)]
    m0: f64,
    #[arg(long)]
    n0: u32,
    #[arg(long)]
    k0: f64,
    #[command(flatten)]
    model: ModelFlags,
    /// Trajectory CSV path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelScanArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    n_from: u32,
    #[arg(long)]
    n_to: u32,
    #[arg(long, default_value_t = 50)]
    n_step: u32,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    /// Fit a power law m_c = c * n^gamma to the line
    #[arg(long)]
    fit: bool,
    /// Fit JSON path (stdout when absent)
    #[arg(long)]
    fit_out: Option<PathBuf>,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ModelKscanArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k_from: f64,
    #[arg(long)]
    k_to: f64,
    #[arg(long, default_value_t = 1.0)]
    k_step: f64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    #[command(flatten)]
    model: ModelFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ReductionFlags {
    /// Comma-separated subset of taut,dup,sub, or "none"
    #[arg(long, default_value = "taut,dup,sub")]
    reductions: String,
    #[arg(long, default_value_t = DEFAULT_CLAUSE_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value = "fixed")]
    order: OrderArg,
}

impl ReductionFlags {
    fn config(&self) -> Result<ReductionConfig, CliError> {
        let mut cfg = ReductionConfig::none().with_budget(self.budget);
        for item in self.reductions.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "none" => {}
                "taut" => cfg.drop_tautologies = true,
                "dup" => cfg.drop_duplicates = true,
                "sub" => cfg.drop_subsumed = true,
                other => return Err(CliError::Usage(format!("unknown reduction '{other}'"))),
            }
        }
        cfg.order_policy = match self.order {
            OrderArg::Fixed => OrderPolicy::FixedIndex,
            OrderArg::MaxAppearance => OrderPolicy::MaxAppearance,
            OrderArg::MinProduct => OrderPolicy::MinProductRS,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct SplitRunArgs {
    input: PathBuf,
    #[command(flatten)]
    reductions: ReductionFlags,
    /// Per-elimination trajectory CSV
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    seed: u64,
    #[arg(long, default_value_t = GenSpec::DEFAULT_MAX_RETRIES)]
    max_retries: usize,
    /// DIMACS path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    reductions: ReductionFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Joined-rows CSV path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metrics JSON path (stdout when absent)
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed '{s}': {e}"))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Model(ModelCommand::Run(a)) => model_run(a, out),
        Command::Model(ModelCommand::Scan(a)) => model_scan(a, out),
        Command::Model(ModelCommand::Kscan(a)) => model_kscan(a, out),
        Command::Split(SplitCommand::Run(a)) => split_run(a, out, err),
        Command::Gen(a) => gen(a, out, err),
        Command::Compare(a) => compare_cmd(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn model_run(a: ModelRunArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.model.params()?;
    let t = run(a.m0, a.n0, a.k0, &params).map_err(usage)?;
    if t.points.iter().any(|p| p.negative_exponent) {
        log::warn!("filling k fell below 2 during the run; attenuation exponent was negative");
    }
    emit(a.out.as_deref(), &t.to_csv(), out)?;
    say(out, &t.summary_json().to_string())?;
    Ok(EXIT_OK)
}

fn n_grid(from: u32, to: u32, step: u32) -> Result<Vec<u32>, CliError> {
    if step == 0 || from > to {
        return Err(CliError::Usage("need n-from <= n-to and n-step > 0".into()));
    }
    Ok((from..=to).step_by(step as usize).collect())
}

fn model_scan(a: ModelScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.model.params()?;
    let ns = n_grid(a.n_from, a.n_to, a.n_step)?;
    let opts = ScanOptions {
        resolution: a.resolution,
        jobs: a.jobs.max(1),
    };
    let line = scan_line(a.k, &ns, &params, &opts).map_err(usage)?;
    for f in &line.failures {
        log::warn!("n={} k={}: {}", f.n, f.k, f.error);
    }
    emit(a.out.as_deref(), &line.to_csv(&params), out)?;
    if a.fit {
        let fit = fit_power_law(&line).map_err(usage)?;
        let js = serde_json::to_string(&fit).expect("fit serializes");
        match a.fit_out {
            Some(p) => emit(Some(&p), &(js + "\n"), out)?,
            None => say(out, &js)?,
        }
    }
    Ok(EXIT_OK)
}

fn model_kscan(a: ModelKscanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = a.model.params()?;
    if !(a.k_step > 0.0) || a.k_from > a.k_to {
        return Err(CliError::Usage("need k-from <= k-to and k-step > 0".into()));
    }
    let count = ((a.k_to - a.k_from) / a.k_step + 1e-9).floor() as usize + 1;
    let ks: Vec<f64> = (0..count).map(|i| a.k_from + i as f64 * a.k_step).collect();
    let opts = ScanOptions {
        resolution: a.resolution,
        jobs: a.jobs.max(1),
    };
    let results = scan_k(a.n, &ks, &params, &opts);
    let outcomes: Vec<_> = ks.iter().zip(results).map(|(&k, r)| (a.n, k, r)).collect();
    emit(a.out.as_deref(), &outcomes_to_csv(&outcomes, &params), out)?;
    Ok(EXIT_OK)
}

fn split_run(a: SplitRunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = a.reductions.config()?;
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", a.input.display())))?;
    let formula = parse_dimacs(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let (verdict, trajectory) = decide(&formula, &cfg).map_err(usage)?;
    if let Some(path) = &a.trace {
        let mut csv = String::from(EmpiricalTrajectoryPoint::CSV_HEADER);
        csv.push('\n');
        for p in &trajectory {
            csv.push_str(&p.csv_row());
            csv.push('\n');
        }
        emit(Some(path), &csv, out)?;
    }
    say(out, &verdict.to_string())?;
    if let Verdict::BudgetExceeded { step, clauses } = verdict {
        let _ = writeln!(err, "clause budget {} exceeded at step {step} ({clauses} clauses)", cfg.clause_budget);
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn gen(a: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let spec = GenSpec {
        n: a.n,
        m: a.m,
        k: a.k,
        seed: a.seed,
        max_retries: a.max_retries,
    };
    let formula = generate(&spec).map_err(usage)?;
    let stats = compute_stats(&formula).summary_line();
    emit(a.out.as_deref(), &write_dimacs(&formula), out)?;
    if a.out.is_some() {
        say(out, &stats)?;
    } else {
        let _ = writeln!(err, "{stats}");
    }
    Ok(EXIT_OK)
}

fn compare_cmd(a: CompareArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = CompareSpec {
        n: a.n,
        m: a.m,
        k: a.k,
        seed: a.seed,
        trials: a.trials,
        reductions: a.reductions.config()?,
        params: a.model.params()?,
        jobs: a.jobs.max(1),
    };
    let report = compare(&spec).map_err(usage)?;
    emit(a.out.as_deref(), &report.to_csv(), out)?;
    let js = serde_json::to_string_pretty(&report.metrics_json()).expect("metrics serialize") + "\n";
    emit(a.metrics.as_deref(), &js, out)?;
    Ok(EXIT_OK)
}
