//! Side-by-side runs of SPLIT on generated formulas and of the recursion
//! model started from the same `(m, n, k)`.
//!
//! Trajectories are joined on the step index `j`; the shorter one is padded
//! with absent values. Trials that hit the clause budget are kept in the row
//! output but excluded from the aggregates.

use serde::Serialize;

use crate::cnf::compute_stats;
use crate::gen::{generate, GenError, GenSpec};
use crate::model::{run, Classification, ModelError, ModelParams, ModelTrajectory};
use crate::split::{decide, EmpiricalTrajectoryPoint, ReductionConfig, SplitError, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Split(#[from] SplitError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareSpec {
    pub n: u32,
    pub m: usize,
    pub k: usize,
    /// Trial `i` uses generator seed `seed + i` (wrapping).
    pub seed: u64,
    pub trials: usize,
    pub reductions: ReductionConfig,
    pub params: ModelParams,
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JoinedRow {
    pub j: usize,
    pub emp_n: Option<usize>,
    pub emp_m: Option<f64>,
    pub emp_x: Option<f64>,
    pub model_n: Option<u32>,
    pub model_m: Option<f64>,
    pub model_x: Option<f64>,
}

impl JoinedRow {
    fn clause_pair(&self) -> Option<(f64, f64)> {
        Some((self.emp_m?, self.model_m?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub verdict: Verdict,
    pub classification: Classification,
    pub rows: Vec<JoinedRow>,
    /// Largest `|m_emp − m_model| / max(m_model, 1)` over joined rows.
    pub max_rel_gap: f64,
    /// First `j` where `max(m, 1)` of the two engines differs by 2× or more.
    pub first_divergence: Option<usize>,
    /// SPLIT decided iff the model stayed bounded. `None` on budget trials.
    pub agreement: Option<bool>,
}

impl TrialReport {
    pub fn is_budget(&self) -> bool {
        !self.verdict.is_decided()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateMetrics {
    pub trials: usize,
    pub budget_trials: usize,
    pub sat: usize,
    pub unsat: usize,
    pub mean_max_rel_gap: Option<f64>,
    pub diverged_trials: usize,
    pub mean_first_divergence: Option<f64>,
    pub agreement_rate: Option<f64>,
    pub model_classification: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub trials: Vec<TrialReport>,
    pub aggregate: AggregateMetrics,
}

impl ComparisonReport {
    pub const CSV_HEADER: &'static str = "trial,seed,j,emp_n,emp_m,emp_x,model_n,model_m,model_x,status";

    pub fn to_csv(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            let status = if t.is_budget() { "budget" } else { "ok" };
            for r in &t.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    t.trial,
                    t.seed,
                    r.j,
                    opt(r.emp_n),
                    opt(r.emp_m),
                    opt(r.emp_x),
                    opt(r.model_n),
                    opt(r.model_m),
                    opt(r.model_x),
                    status
                ));
            }
        }
        out
    }

    pub fn metrics_json(&self) -> serde_json::Value {
        let per_trial: Vec<_> = self
            .trials
            .iter()
            .map(|t| {
                serde_json::json!({
                    "trial": t.trial,
                    "seed": t.seed,
                    "verdict": t.verdict.to_string(),
                    "model_class": t.classification.name(),
                    "max_rel_gap": t.max_rel_gap,
                    "first_divergence": t.first_divergence,
                    "agreement": t.agreement,
                })
            })
            .collect();
        serde_json::json!({ "aggregate": self.aggregate, "trials": per_trial })
    }
}

/// Joins an empirical run (with its initial formula stats as `j = 0`) and a
/// model trajectory on `j`.
pub fn join_trajectories(
    initial: (usize, usize, Option<f64>),
    empirical: &[EmpiricalTrajectoryPoint],
    model: &ModelTrajectory,
) -> Vec<JoinedRow> {
    let mut emp: Vec<(usize, f64, Option<f64>)> = vec![(initial.0, initial.1 as f64, initial.2)];
    emp.extend(empirical.iter().map(|p| (p.n_j, p.m_j as f64, p.x_j)));
    let len = emp.len().max(model.points.len());
    (0..len)
        .map(|j| {
            let e = emp.get(j);
            let mo = model.points.get(j);
            JoinedRow {
                j,
                emp_n: e.map(|e| e.0),
                emp_m: e.map(|e| e.1),
                emp_x: e.and_then(|e| e.2),
                model_n: mo.map(|p| p.n),
                model_m: mo.map(|p| p.m),
                model_x: mo.map(|p| p.x),
            }
        })
        .collect()
}

fn gap_metrics(rows: &[JoinedRow]) -> (f64, Option<usize>) {
    let mut max_gap = 0.0f64;
    let mut first = None;
    for r in rows {
        let Some((e, m)) = r.clause_pair() else { continue };
        max_gap = max_gap.max((e - m).abs() / m.max(1.0));
        let (a, b) = (e.max(1.0), m.max(1.0));
        if first.is_none() && a.max(b) >= 2.0 * a.min(b) {
            first = Some(r.j);
        }
    }
    (max_gap, first)
}

pub fn run_trial(spec: &CompareSpec, trial: usize, model: &ModelTrajectory) -> Result<TrialReport, CompareError> {
    let seed = spec.seed.wrapping_add(trial as u64);
    let formula = generate(&GenSpec::new(spec.n, spec.m, spec.k, seed))?;
    let stats = compute_stats(&formula);
    let (verdict, trajectory) = decide(&formula, &spec.reductions)?;
    let rows = join_trajectories((stats.n_active, stats.m, stats.x), &trajectory, model);
    let (max_rel_gap, first_divergence) = gap_metrics(&rows);
    let agreement = verdict
        .is_decided()
        .then(|| !model.classification.is_hard());
    Ok(TrialReport {
        trial,
        seed,
        verdict,
        classification: model.classification,
        rows,
        max_rel_gap,
        first_divergence,
        agreement,
    })
}

pub fn compare(spec: &CompareSpec) -> Result<ComparisonReport, CompareError> {
    spec.reductions.validate()?;
    let model = run(spec.m as f64, spec.n, spec.k as f64, &spec.params)?;
    let ids: Vec<usize> = (0..spec.trials).collect();
    let results: Vec<Result<TrialReport, CompareError>> = if spec.jobs > 1 {
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(spec.jobs).build() {
            Ok(pool) => pool.install(|| ids.par_iter().map(|&t| run_trial(spec, t, &model)).collect()),
            Err(_) => ids.iter().map(|&t| run_trial(spec, t, &model)).collect(),
        }
    } else {
        ids.iter().map(|&t| run_trial(spec, t, &model)).collect()
    };
    let trials = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let aggregate = aggregate(&trials, &model);
    Ok(ComparisonReport { trials, aggregate })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn aggregate(trials: &[TrialReport], model: &ModelTrajectory) -> AggregateMetrics {
    let decided: Vec<&TrialReport> = trials.iter().filter(|t| !t.is_budget()).collect();
    AggregateMetrics {
        trials: trials.len(),
        budget_trials: trials.len() - decided.len(),
        sat: decided.iter().filter(|t| t.verdict == Verdict::Sat).count(),
        unsat: decided.iter().filter(|t| t.verdict == Verdict::Unsat).count(),
        mean_max_rel_gap: mean(decided.iter().map(|t| t.max_rel_gap)),
        diverged_trials: decided.iter().filter(|t| t.first_divergence.is_some()).count(),
        mean_first_divergence: mean(decided.iter().filter_map(|t| t.first_divergence.map(|j| j as f64))),
        agreement_rate: mean(decided.iter().filter_map(|t| t.agreement.map(|a| f64::from(u8::from(a))))),
        model_classification: model.classification.name().to_string(),
    }
}
