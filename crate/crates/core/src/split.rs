//! SPLIT: decide satisfiability by eliminating one variable at a time.
//!
//! Eliminating `v` partitions the formula into clauses with `v` (the Y block,
//! `v` removed), clauses with `¬v` (the Z block, `¬v` removed) and the rest.
//! The disjunction `(Y_1 ∧ … ∧ Y_r) ∨ (Z_1 ∧ … ∧ Z_s)` is rewritten in CNF as
//! the `r·s` pairwise unions `Y_i ∨ Z_j`, conjoined with the rest. Optional
//! reductions drop tautologies, duplicates and subsumed clauses.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{
    compute_stats, disjoin, first_occurrences, subsumption_survivors, Clause, Disjunction, Formula,
};

/// Eliminations default to this clause budget.
pub const DEFAULT_CLAUSE_BUDGET: usize = 1_000_000;

/// With subsumption on, the pre-subsumption pool may exceed the budget by at
/// most this factor before the step aborts.
pub const SUBSUMPTION_POOL_SLACK: usize = 4;

/// Largest active-variable count [`brute_force`] will enumerate.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum OrderPolicy {
    /// Smallest variable index first.
    #[default]
    FixedIndex,
    /// Most occurrences first (ties: smallest index).
    MaxAppearance,
    /// Smallest `r·s` first (ties: smallest index).
    MinProductRS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionConfig {
    pub drop_tautologies: bool,
    pub drop_duplicates: bool,
    pub drop_subsumed: bool,
    pub clause_budget: usize,
    pub order_policy: OrderPolicy,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig::all()
    }
}

impl ReductionConfig {
    pub fn all() -> Self {
        ReductionConfig {
            drop_tautologies: true,
            drop_duplicates: true,
            drop_subsumed: true,
            clause_budget: DEFAULT_CLAUSE_BUDGET,
            order_policy: OrderPolicy::FixedIndex,
        }
    }

    pub fn none() -> Self {
        ReductionConfig {
            drop_tautologies: false,
            drop_duplicates: false,
            drop_subsumed: false,
            ..ReductionConfig::all()
        }
    }

    pub fn with_budget(self, clause_budget: usize) -> Self {
        ReductionConfig {
            clause_budget,
            ..self
        }
    }

    pub fn with_order(self, order_policy: OrderPolicy) -> Self {
        ReductionConfig {
            order_policy,
            ..self
        }
    }

    /// Every valid combination of the three reduction switches.
    pub fn combinations() -> Vec<ReductionConfig> {
        let mut out = Vec::new();
        for taut in [false, true] {
            for dup in [false, true] {
                for sub in [false, true] {
                    if sub && !dup {
                        continue;
                    }
                    out.push(ReductionConfig {
                        drop_tautologies: taut,
                        drop_duplicates: dup,
                        drop_subsumed: sub,
                        ..ReductionConfig::all()
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), SplitError> {
        if self.drop_subsumed && !self.drop_duplicates {
            return Err(SplitError::InvalidConfig(
                "subsumption removal requires duplicate removal".into(),
            ));
        }
        if self.clause_budget == 0 {
            return Err(SplitError::InvalidConfig("clause budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("invalid reduction config: {0}")]
    InvalidConfig(String),
    #[error("variable {var} is outside 1..={num_vars}")]
    NoSuchVariable { var: u32, num_vars: u32 },
    #[error("clause budget {budget} exceeded: {clauses} clauses")]
    BudgetExceeded { clauses: usize, budget: usize },
    #[error("brute force refused: {active} active variables (limit {limit})")]
    TooManyVariables { active: usize, limit: usize },
}

/// Clauses of a formula split by their relation to one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Clauses that held the positive literal, with it removed.
    pub y_block: Vec<Clause>,
    /// Clauses that held the negative literal, with it removed.
    pub z_block: Vec<Clause>,
    pub rest: Vec<Clause>,
    /// Clauses holding both `v` and `¬v`; TRUE under either substitution.
    pub vanished: usize,
}

impl Partition {
    pub fn r(&self) -> usize {
        self.y_block.len()
    }

    pub fn s(&self) -> usize {
        self.z_block.len()
    }

    pub fn m_rest(&self) -> usize {
        self.rest.len()
    }
}

/// `r + s + m_rest + vanished` equals the clause count of `f`.
pub fn partition(f: &Formula, v: u32) -> Result<Partition, SplitError> {
    check_var(f, v)?;
    let (pos, neg) = (crate::cnf::Literal::pos(v), crate::cnf::Literal::neg(v));
    let mut p = Partition {
        y_block: Vec::new(),
        z_block: Vec::new(),
        rest: Vec::new(),
        vanished: 0,
    };
    for c in f.clauses() {
        match (c.contains(pos), c.contains(neg)) {
            (false, false) => p.rest.push(c.clone()),
            (true, false) => p.y_block.push(c.without_var(v)),
            (false, true) => p.z_block.push(c.without_var(v)),
            (true, true) => p.vanished += 1,
        }
    }
    Ok(p)
}

fn check_var(f: &Formula, v: u32) -> Result<(), SplitError> {
    if v == 0 || v > f.num_vars() {
        return Err(SplitError::NoSuchVariable {
            var: v,
            num_vars: f.num_vars(),
        });
    }
    Ok(())
}

/// Counts from one elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EliminationCounts {
    pub r: usize,
    pub s: usize,
    pub m_rest: usize,
    /// Raw pairwise unions, `r·s` (0 in the pure-literal case).
    pub generated: usize,
    /// Unions that survived every reduction.
    pub kept: usize,
    /// Clause count of the resulting formula.
    pub m_after: usize,
}

/// Eliminates `v` and returns the resulting formula.
pub fn eliminate(f: &Formula, v: u32, cfg: &ReductionConfig) -> Result<Formula, SplitError> {
    eliminate_counted(f, v, cfg).map(|(g, _)| g)
}

/// [`eliminate`] plus the step's block and reduction counts.
pub fn eliminate_counted(
    f: &Formula,
    v: u32,
    cfg: &ReductionConfig,
) -> Result<(Formula, EliminationCounts), SplitError> {
    cfg.validate()?;
    let part = partition(f, v)?;
    let (r, s, m_rest) = (part.r(), part.s(), part.m_rest());

    // pure literal: the bracketed disjunction is TRUE
    let generated = if r == 0 || s == 0 { 0 } else { r * s };
    let pool_limit = if cfg.drop_subsumed {
        cfg.clause_budget.saturating_mul(SUBSUMPTION_POOL_SLACK)
    } else {
        cfg.clause_budget
    };

    let mut new_clauses: Vec<Clause> = Vec::new();
    let mut seen: HashSet<Clause> = HashSet::new();
    if generated > 0 {
        if cfg.drop_duplicates {
            seen.extend(part.rest.iter().cloned());
        }
        for y in &part.y_block {
            for z in &part.z_block {
                let clause = match disjoin(y, z) {
                    Disjunction::Clause(c) => c,
                    Disjunction::Tautology if cfg.drop_tautologies => continue,
                    Disjunction::Tautology => Clause::new(
                        y.literals().iter().chain(z.literals()).copied(),
                    ),
                };
                if cfg.drop_duplicates && !seen.insert(clause.clone()) {
                    continue;
                }
                new_clauses.push(clause);
                if new_clauses.len() + m_rest > pool_limit {
                    return Err(SplitError::BudgetExceeded {
                        clauses: new_clauses.len() + m_rest,
                        budget: cfg.clause_budget,
                    });
                }
            }
        }
    }

    let n_new = new_clauses.len();
    let mut all = new_clauses;
    all.extend(part.rest);
    let keep: Vec<bool> = if cfg.drop_subsumed {
        subsumption_survivors(&all)
    } else if cfg.drop_duplicates {
        first_occurrences(&all)
    } else {
        vec![true; all.len()]
    };
    let kept = keep[..n_new].iter().filter(|&&k| k).count();
    let clauses: Vec<Clause> = all
        .into_iter()
        .zip(&keep)
        .filter_map(|(c, &k)| k.then_some(c))
        .collect();
    let m_after = clauses.len();
    if m_after > cfg.clause_budget {
        return Err(SplitError::BudgetExceeded {
            clauses: m_after,
            budget: cfg.clause_budget,
        });
    }
    Ok((
        f.with_clauses(clauses),
        EliminationCounts {
            r,
            s,
            m_rest,
            generated,
            kept,
            m_after,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Sat,
    Unsat,
    BudgetExceeded { step: usize, clauses: usize },
}

impl Verdict {
    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::BudgetExceeded { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat => write!(f, "SAT"),
            Verdict::Unsat => write!(f, "UNSAT"),
            Verdict::BudgetExceeded { .. } => write!(f, "BUDGET"),
        }
    }
}

/// One completed elimination in a [`decide`] run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalTrajectoryPoint {
    pub j: usize,
    pub eliminated_variable: u32,
    /// Variables still occurring after the step.
    pub n_j: usize,
    pub m_j: usize,
    pub r_j: usize,
    pub s_j: usize,
    pub m_rest: usize,
    pub generated: usize,
    pub kept: usize,
    pub k_mean_j: f64,
    pub p_mean_j: f64,
    pub x_j: Option<f64>,
    pub step_cost: f64,
}

impl EmpiricalTrajectoryPoint {
    pub const CSV_HEADER: &'static str = "j,var,n,m,r,s,generated,kept,k_mean,p_mean,x,step_cost";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.j,
            self.eliminated_variable,
            self.n_j,
            self.m_j,
            self.r_j,
            self.s_j,
            self.generated,
            self.kept,
            self.k_mean_j,
            self.p_mean_j,
            self.x_j.map(|x| x.to_string()).unwrap_or_default(),
            self.step_cost
        )
    }
}

fn pick_variable(f: &Formula, policy: OrderPolicy) -> Option<u32> {
    let mut pos = vec![0usize; f.num_vars() as usize + 1];
    let mut neg = vec![0usize; f.num_vars() as usize + 1];
    for lit in f.clauses().iter().flat_map(|c| c.literals()) {
        if lit.is_positive() {
            pos[lit.var() as usize] += 1;
        } else {
            neg[lit.var() as usize] += 1;
        }
    }
    let active = (1..=f.num_vars()).filter(|&v| pos[v as usize] + neg[v as usize] > 0);
    match policy {
        OrderPolicy::FixedIndex => active.into_iter().next(),
        // min_by_key / max_by_key pick the first / last extreme, so reverse for max
        OrderPolicy::MaxAppearance => active
            .rev()
            .max_by_key(|&v| pos[v as usize] + neg[v as usize]),
        OrderPolicy::MinProductRS => active.min_by_key(|&v| pos[v as usize] * neg[v as usize]),
    }
}

/// Runs SPLIT to completion.
///
/// Stops with SAT on an empty formula, UNSAT as soon as an empty clause is
/// present, or `BudgetExceeded` when an elimination trips the clause budget.
/// Variables that do not occur are skipped without a trajectory point.
pub fn decide(
    f: &Formula,
    cfg: &ReductionConfig,
) -> Result<(Verdict, Vec<EmpiricalTrajectoryPoint>), SplitError> {
    cfg.validate()?;
    let mut current = f.clone();
    let mut trajectory = Vec::new();
    loop {
        if current.has_empty_clause() {
            return Ok((Verdict::Unsat, trajectory));
        }
        if current.is_empty() {
            return Ok((Verdict::Sat, trajectory));
        }
        let v = pick_variable(&current, cfg.order_policy)
            .expect("a nonempty formula without empty clauses has an active variable");
        let step = trajectory.len() + 1;
        let (next, counts) = match eliminate_counted(&current, v, cfg) {
            Ok(res) => res,
            Err(SplitError::BudgetExceeded { clauses, .. }) => {
                return Ok((Verdict::BudgetExceeded { step, clauses }, trajectory));
            }
            Err(e) => return Err(e),
        };
        let stats = compute_stats(&next);
        let n_j = stats.n_active;
        trajectory.push(EmpiricalTrajectoryPoint {
            j: step,
            eliminated_variable: v,
            n_j,
            m_j: counts.m_after,
            r_j: counts.r,
            s_j: counts.s,
            m_rest: counts.m_rest,
            generated: counts.generated,
            kept: counts.kept,
            k_mean_j: stats.k_mean,
            p_mean_j: stats.p_mean,
            x_j: stats.x,
            step_cost: (counts.m_after as f64).powi(2) * n_j as f64,
        });
        current = next;
    }
}

/// Exhaustive satisfiability check over the active variables.
pub fn brute_force(f: &Formula) -> Result<Verdict, SplitError> {
    let active = f.active_vars();
    if active.len() > BRUTE_FORCE_MAX_VARS {
        return Err(SplitError::TooManyVariables {
            active: active.len(),
            limit: BRUTE_FORCE_MAX_VARS,
        });
    }
    let mut bit = vec![0u32; f.num_vars() as usize + 1];
    for (i, &v) in active.iter().enumerate() {
        bit[v as usize] = 1 << i;
    }
    // a clause is satisfied by assignment `a` iff a & pos != 0 or !a & neg != 0
    let masks: Vec<(u32, u32)> = f
        .clauses()
        .iter()
        .map(|c| {
            c.literals().iter().fold((0, 0), |(p, n), l| {
                if l.is_positive() {
                    (p | bit[l.var() as usize], n)
                } else {
                    (p, n | bit[l.var() as usize])
                }
            })
        })
        .collect();
    let sat = (0u32..1 << active.len())
        .any(|a| masks.iter().all(|&(p, n)| a & p != 0 || !a & n != 0));
    Ok(if sat { Verdict::Sat } else { Verdict::Unsat })
}
