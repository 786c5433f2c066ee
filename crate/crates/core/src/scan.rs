//! Locating the Easy/Hard boundary of the recursion model.
//!
//! A critical point `m_c(n, k)` is the midpoint of a bracket `[lo, hi]` with
//! `run(lo)` bounded (Easy or Exhausted) and `run(hi)` Hard, narrowed by
//! bisection to the requested resolution.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{run, ModelError, ModelParams};

/// Bracketing gives up above this many clauses.
pub const UPPER_GUARD: f64 = 1e12;

pub const DEFAULT_RESOLUTION: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no transition below m0 = {guard:e} (n={n}, k={k})")]
    NoTransition { n: u32, k: f64, guard: f64 },
    #[error("classification not monotone in m0: lo={lo} is {lo_class}, hi={hi} is {hi_class}")]
    MonotonicityViolation {
        lo: f64,
        hi: f64,
        lo_class: &'static str,
        hi_class: &'static str,
    },
    #[error("every grid point failed")]
    AllPointsFailed,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ScanError {
    /// Short token for the `status` column of line CSVs.
    pub fn status(&self) -> &'static str {
        match self {
            ScanError::InvalidArgument(_) => "invalid",
            ScanError::NoTransition { .. } => "no_transition",
            ScanError::MonotonicityViolation { .. } => "non_monotone",
            ScanError::AllPointsFailed => "failed",
            ScanError::Model(_) => "model_error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub n: u32,
    pub k: f64,
    pub m_c: f64,
    /// Largest bounded `m0` found.
    pub lower: f64,
    /// Smallest Hard `m0` found.
    pub upper: f64,
    #[serde(skip)]
    pub params: ModelParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub resolution: f64,
    /// Worker threads for grid scans; 1 runs inline.
    pub jobs: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            resolution: DEFAULT_RESOLUTION,
            jobs: 1,
        }
    }
}

fn is_hard(m0: f64, n: u32, k: f64, params: &ModelParams) -> Result<bool, ScanError> {
    Ok(run(m0, n, k, params)?.classification.is_hard())
}

fn class_name(hard: bool) -> &'static str {
    if hard {
        "Hard"
    } else {
        "bounded"
    }
}

/// Brackets from `m0 = n` by doubling (or halving when `n` is already Hard),
/// then bisects until the bracket is no wider than `resolution`.
pub fn find_critical_m(
    n: u32,
    k: f64,
    params: &ModelParams,
    resolution: f64,
) -> Result<CriticalPoint, ScanError> {
    if !(k >= 2.0 && k <= f64::from(n)) {
        return Err(ScanError::InvalidArgument(format!("need 2 <= k <= n (got k={k}, n={n})")));
    }
    if !(resolution > 0.0) {
        return Err(ScanError::InvalidArgument("resolution must be positive".into()));
    }
    params.validate()?;

    let start = f64::from(n);
    let (mut lo, mut hi);
    if is_hard(start, n, k, params)? {
        hi = start;
        lo = start / 2.0;
        while is_hard(lo, n, k, params)? {
            if lo < params.easy_threshold {
                // below the threshold every run is Easy at j = 0
                return Err(ScanError::MonotonicityViolation {
                    lo,
                    hi,
                    lo_class: "Hard",
                    hi_class: "Hard",
                });
            }
            hi = lo;
            lo /= 2.0;
        }
    } else {
        lo = start;
        hi = start * 2.0;
        while !is_hard(hi, n, k, params)? {
            if hi > UPPER_GUARD {
                return Err(ScanError::NoTransition {
                    n,
                    k,
                    guard: UPPER_GUARD,
                });
            }
            lo = hi;
            hi *= 2.0;
        }
    }

    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if is_hard(mid, n, k, params)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let (lo_hard, hi_hard) = (is_hard(lo, n, k, params)?, is_hard(hi, n, k, params)?);
    if lo_hard || !hi_hard {
        return Err(ScanError::MonotonicityViolation {
            lo,
            hi,
            lo_class: class_name(lo_hard),
            hi_class: class_name(hi_hard),
        });
    }
    Ok(CriticalPoint {
        n,
        k,
        m_c: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        params: *params,
    })
}

/// A grid point that did not produce a critical point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure {
    pub n: u32,
    pub k: f64,
    pub error: ScanError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalLine {
    pub k: f64,
    pub points: Vec<CriticalPoint>,
    pub failures: Vec<ScanFailure>,
}

impl CriticalLine {
    pub const CSV_HEADER: &'static str = "n,k,alpha,lambda,m_c,status";

    pub fn to_csv(&self, params: &ModelParams) -> String {
        let rows = self
            .points
            .iter()
            .map(|p| (p.n, Ok(*p)))
            .chain(self.failures.iter().map(|f| (f.n, Err(f.clone()))));
        let mut rows: Vec<_> = rows.collect();
        rows.sort_by_key(|(n, _)| *n);
        let outcomes: Vec<(u32, f64, Result<CriticalPoint, ScanError>)> = rows
            .into_iter()
            .map(|(n, r)| (n, self.k, r.map_err(|f| f.error)))
            .collect();
        outcomes_to_csv(&outcomes, params)
    }
}

/// Line CSV for any ordered list of grid outcomes.
pub fn outcomes_to_csv(outcomes: &[(u32, f64, Result<CriticalPoint, ScanError>)], params: &ModelParams) -> String {
    let mut out = String::from(CriticalLine::CSV_HEADER);
    out.push('\n');
    for (n, k, res) in outcomes {
        let (m_c, status) = match res {
            Ok(p) => (p.m_c.to_string(), "ok"),
            Err(e) => (String::new(), e.status()),
        };
        out.push_str(&format!("{n},{k},{},{},{m_c},{status}\n", params.alpha, params.lambda));
    }
    out
}

fn evaluate_grid<T, F>(items: &[T], jobs: usize, f: F) -> Vec<Result<CriticalPoint, ScanError>>
where
    T: Sync,
    F: Fn(&T) -> Result<CriticalPoint, ScanError> + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(&f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        // collect keeps input order
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(&f).collect(),
    }
}

/// Critical points for each `n` at fixed `k`. Failed points are recorded
/// without aborting; the scan fails only if every point fails.
pub fn scan_line(k: f64, n_values: &[u32], params: &ModelParams, opts: &ScanOptions) -> Result<CriticalLine, ScanError> {
    if n_values.is_empty() {
        return Err(ScanError::InvalidArgument("n grid is empty".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ScanError::InvalidArgument("n grid must be strictly ascending".into()));
    }
    let results = evaluate_grid(n_values, opts.jobs, |&n| find_critical_m(n, k, params, opts.resolution));
    let mut line = CriticalLine {
        k,
        points: Vec::new(),
        failures: Vec::new(),
    };
    for (&n, res) in n_values.iter().zip(results) {
        match res {
            Ok(p) => line.points.push(p),
            Err(error) => line.failures.push(ScanFailure { n, k, error }),
        }
    }
    if line.points.is_empty() {
        return Err(ScanError::AllPointsFailed);
    }
    Ok(line)
}

/// Critical points for each `k` at fixed `n`, one result per input `k`.
pub fn scan_k(
    n: u32,
    k_values: &[f64],
    params: &ModelParams,
    opts: &ScanOptions,
) -> Vec<Result<CriticalPoint, ScanError>> {
    evaluate_grid(k_values, opts.jobs, |&k| find_critical_m(n, k, params, opts.resolution))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS of the residuals of `ln y` about the fitted line.
    pub residual: f64,
    pub n_points: usize,
}

/// Least-squares line through `(ln x, ln y)`: `y ≈ prefactor · x^exponent`.
pub fn fit_power_law_xy(points: &[(f64, f64)]) -> Result<PowerLawFit, ScanError> {
    if points.len() < 3 {
        return Err(ScanError::InvalidArgument(format!(
            "a power-law fit needs at least 3 points (got {})",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(ScanError::InvalidArgument("power-law fit needs positive data".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let (slope, intercept) = least_squares(&logs);
    let sse: f64 = logs
        .iter()
        .map(|&(u, v)| (v - (intercept + slope * u)).powi(2))
        .sum();
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        residual: (sse / logs.len() as f64).sqrt(),
        n_points: logs.len(),
    })
}

pub fn fit_power_law(line: &CriticalLine) -> Result<PowerLawFit, ScanError> {
    let pts: Vec<(f64, f64)> = line.points.iter().map(|p| (f64::from(p.n), p.m_c)).collect();
    fit_power_law_xy(&pts)
}

/// Ordinary least squares `v = intercept + slope·u`.
pub(crate) fn least_squares(data: &[(f64, f64)]) -> (f64, f64) {
    let len = data.len() as f64;
    let mean_u = data.iter().map(|d| d.0).sum::<f64>() / len;
    let mean_v = data.iter().map(|d| d.1).sum::<f64>() / len;
    let (mut suv, mut suu) = (0.0, 0.0);
    for &(u, v) in data {
        suv += (u - mean_u) * (v - mean_v);
        suu += (u - mean_u) * (u - mean_u);
    }
    let slope = suv / suu;
    (slope, mean_v - slope * mean_u)
}

/// How the total clause count just below the critical line grows with `n0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    /// `(n0, log2 Σ_j m_j)` evaluated at each point's lower bracket end.
    pub samples: Vec<(u32, f64)>,
    /// Least-squares slope of `log2 Σ m_j` against `n0`.
    pub slope: f64,
}

pub fn clause_sum_scaling(line: &CriticalLine) -> Result<ScalingReport, ScanError> {
    if line.points.len() < 2 {
        return Err(ScanError::InvalidArgument("scaling needs at least 2 points".into()));
    }
    let mut samples = Vec::with_capacity(line.points.len());
    for p in &line.points {
        let t = run(p.lower, p.n, p.k, &p.params)?;
        let total: f64 = t.points.iter().map(|q| q.m).sum();
        samples.push((p.n, total.log2()));
    }
    let data: Vec<(f64, f64)> = samples.iter().map(|&(n, s)| (f64::from(n), s)).collect();
    let (slope, _) = least_squares(&data);
    Ok(ScalingReport { samples, slope })
}
