//! Mean-field recursion for the clause count `m`, variable count `n` and
//! filling factor `x = p/m = k/n` of a formula under SPLIT.
//!
//! One step eliminates a variable from an idealized homogeneous, symmetric
//! formula:
//!
//! ```text
//! m' = m − p + (1−α) · p²/4 · (1 − x²/2) · r(n, x)
//! p' = x(m − p) + (1−αλ) · p²/4 · (2x − 3x²/2) · r(n, x)
//! n' = n − 1,   x' = p'/m',   k' = x'·n'
//! ```
//!
//! where `r(n, x) = (1 − x²/2)^e` attenuates the cross product for orthogonal
//! clause pairs beyond first order. The exponent `e` is `k − 2 = x·n − 2`
//! ([`RMode::FillingExponent`], default) or `n − 2`
//! ([`RMode::VariableExponent`]). `α` is the fraction of new clauses removed
//! as redundant and `λ` the ratio of their filling to the mean new filling.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RMode {
    /// Exponent `x·n − 2`.
    #[default]
    FillingExponent,
    /// Exponent `n − 2`.
    VariableExponent,
}

impl RMode {
    pub fn exponent(self, n: u32, x: f64) -> f64 {
        match self {
            RMode::FillingExponent => x * f64::from(n) - 2.0,
            RMode::VariableExponent => f64::from(n) - 2.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value at step from n={n}")]
    Overflow { n: u32 },
}

/// Real-valued formula parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelState {
    pub m: f64,
    pub n: u32,
    pub x: f64,
}

impl ModelState {
    pub fn new(m: f64, n: u32, x: f64) -> Result<Self, ModelError> {
        let s = ModelState { m, n, x };
        s.validate()?;
        Ok(s)
    }

    pub fn from_filling(m: f64, n: u32, k: f64) -> Result<Self, ModelError> {
        ModelState::new(m, n, k / f64::from(n))
    }

    /// Mean appearance `p = x·m`.
    pub fn p(&self) -> f64 {
        self.x * self.m
    }

    /// Mean clause filling `k = x·n`.
    pub fn k(&self) -> f64 {
        self.x * f64::from(self.n)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.m.is_finite() && self.m >= 0.0) {
            return Err(ModelError::InvalidArgument(format!("m must be finite and >= 0 (got {})", self.m)));
        }
        if self.n < 2 {
            return Err(ModelError::InvalidArgument(format!("n must be >= 2 (got {})", self.n)));
        }
        if !(0.0..=1.0).contains(&self.x) {
            return Err(ModelError::InvalidArgument(format!("x must lie in [0, 1] (got {})", self.x)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub lambda: f64,
    pub r_mode: RMode,
    pub easy_threshold: f64,
    pub blowup_factor: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            alpha: 0.0,
            lambda: 1.0,
            r_mode: RMode::FillingExponent,
            easy_threshold: 1.0,
            blowup_factor: 2.0,
        }
    }
}

impl ModelParams {
    pub fn with_redundancy(self, alpha: f64, lambda: f64) -> Self {
        ModelParams { alpha, lambda, ..self }
    }

    pub fn with_r_mode(self, r_mode: RMode) -> Self {
        ModelParams { r_mode, ..self }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(ModelError::InvalidArgument(format!("alpha must lie in [0, 1) (got {})", self.alpha)));
        }
        if self.alpha > 0.0 && !(1.0 <= self.lambda && self.lambda * self.alpha <= 1.0) {
            return Err(ModelError::InvalidArgument(format!(
                "lambda must lie in [1, 1/alpha] (got {} with alpha {})",
                self.lambda, self.alpha
            )));
        }
        if !(self.easy_threshold.is_finite() && self.easy_threshold > 0.0) {
            return Err(ModelError::InvalidArgument("easy threshold must be positive".into()));
        }
        if !(self.blowup_factor.is_finite() && self.blowup_factor > 1.0) {
            return Err(ModelError::InvalidArgument("blowup factor must exceed 1".into()));
        }
        Ok(())
    }

    /// `λ` as it enters the recursion; irrelevant when `α = 0`.
    fn effective_lambda(&self) -> f64 {
        if self.alpha == 0.0 {
            1.0
        } else {
            self.lambda
        }
    }
}

/// `(1 − x²/2)` raised to the exponent selected by `mode`.
pub fn attenuation(n: u32, x: f64, mode: RMode) -> f64 {
    (1.0 - 0.5 * x * x).powf(mode.exponent(n, x))
}

/// Intermediate quantities of one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBreakdown {
    pub m_new: f64,
    pub p_new: f64,
    pub r_value: f64,
    pub m_rem: f64,
    pub p_rem: f64,
    /// `(n−1)·p_new/m_new`, 0 when `m_new = 0`.
    pub k_new: f64,
    /// `(n−1)·p_rem/m_rem`, 0 when `m_rem = 0`.
    pub k_rem: f64,
}

/// One elimination step. Requires `n ≥ 3`.
pub fn step(s: &ModelState, params: &ModelParams) -> Result<(ModelState, StepBreakdown), ModelError> {
    s.validate()?;
    if s.n < 3 {
        return Err(ModelError::InvalidArgument(format!("a step needs n >= 3 (got {})", s.n)));
    }
    let ModelState { m, n, x } = *s;
    let p = x * m;
    let r = attenuation(n, x, params.r_mode);
    let cross = 0.25 * p * p * r;
    let m_new = cross * (1.0 - 0.5 * x * x);
    let p_new = cross * (2.0 * x - 1.5 * x * x);
    let m_rem = (1.0 - params.alpha) * m_new;
    let p_rem = (1.0 - params.alpha * params.effective_lambda()) * p_new;

    let m_next = m - p + m_rem;
    let p_next = x * (m - p) + p_rem;
    if !(m_next.is_finite() && p_next.is_finite()) {
        return Err(ModelError::Overflow { n });
    }
    // p' ≤ m' holds exactly; clamp the last-ulp excess near x = 1
    let x_next = if m_next > 0.0 { (p_next / m_next).min(1.0) } else { 0.0 };
    let fill = |pp: f64, mm: f64| if mm > 0.0 { f64::from(n - 1) * pp / mm } else { 0.0 };
    let breakdown = StepBreakdown {
        m_new,
        p_new,
        r_value: r,
        m_rem,
        p_rem,
        k_new: fill(p_new, m_new),
        k_rem: fill(p_rem, m_rem),
    };
    Ok((
        ModelState {
            m: m_next,
            n: n - 1,
            x: x_next,
        },
        breakdown,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum Classification {
    /// `m_j` fell below the easy threshold.
    Easy { stop_step: u32 },
    /// `m_j` exceeded `m₀·blowup_factorⁿ⁰` or overflowed.
    Hard { blowup_step: u32 },
    /// Reached `n = 2` with neither.
    Exhausted,
}

impl Classification {
    pub fn is_hard(&self) -> bool {
        matches!(self, Classification::Hard { .. })
    }

    pub fn is_easy(&self) -> bool {
        matches!(self, Classification::Easy { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::Easy { .. } => "Easy",
            Classification::Hard { .. } => "Hard",
            Classification::Exhausted => "Exhausted",
        }
    }

    pub fn step(&self) -> Option<u32> {
        match *self {
            Classification::Easy { stop_step } => Some(stop_step),
            Classification::Hard { blowup_step } => Some(blowup_step),
            Classification::Exhausted => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint {
    pub j: u32,
    pub n: u32,
    pub m: f64,
    pub p: f64,
    pub x: f64,
    pub k: f64,
    /// Attenuation at this state (the factor used by the next step).
    pub r: f64,
    pub step_cost: f64,
    pub cumulative_cost: f64,
    /// `x·n < 2`, so the filling exponent is negative and `r > 1`.
    pub negative_exponent: bool,
}

impl ModelPoint {
    pub const CSV_HEADER: &'static str = "j,n,m,p,x,k,r,step_cost,cum_cost";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.j, self.n, self.m, self.p, self.x, self.k, self.r, self.step_cost, self.cumulative_cost
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelTrajectory {
    pub points: Vec<ModelPoint>,
    pub classification: Classification,
}

impl ModelTrajectory {
    pub fn running_time(&self) -> f64 {
        running_time(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(ModelPoint::CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&p.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class": self.classification.name(),
            "stop_step": self.classification.step(),
            "running_time": self.running_time(),
            "steps": self.points.len().saturating_sub(1),
        })
    }

    pub fn peak_m(&self) -> f64 {
        self.points.iter().map(|p| p.m).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn point(j: u32, s: &ModelState, mode: RMode, cumulative: f64) -> ModelPoint {
    let step_cost = s.m * s.m * f64::from(s.n);
    ModelPoint {
        j,
        n: s.n,
        m: s.m,
        p: s.p(),
        x: s.x,
        k: s.k(),
        r: attenuation(s.n, s.x, mode),
        step_cost,
        cumulative_cost: cumulative + step_cost,
        negative_exponent: mode == RMode::FillingExponent && s.k() < 2.0,
    }
}

/// Iterates [`step`] from `(m0, n0, x0 = k0/n0)` until the state is Easy,
/// Hard or exhausted. Every visited state is recorded, including `j = 0`.
pub fn run(m0: f64, n0: u32, k0: f64, params: &ModelParams) -> Result<ModelTrajectory, ModelError> {
    params.validate()?;
    if !(k0 >= 2.0) {
        return Err(ModelError::InvalidArgument(format!("k0 must be >= 2 (got {k0})")));
    }
    if k0 > f64::from(n0) {
        return Err(ModelError::InvalidArgument(format!("k0 must be <= n0 (got k0={k0}, n0={n0})")));
    }
    let mut state = ModelState::from_filling(m0, n0, k0)?;
    let bound = m0 * params.blowup_factor.powf(f64::from(n0));
    let last = n0 - 2;

    let mut points = vec![point(0, &state, params.r_mode, 0.0)];
    let mut j = 0u32;
    let classification = loop {
        if state.m < params.easy_threshold {
            break Classification::Easy { stop_step: j };
        }
        if state.m > bound {
            break Classification::Hard { blowup_step: j };
        }
        if j == last {
            break Classification::Exhausted;
        }
        state = match step(&state, params) {
            Ok((next, _)) => next,
            Err(ModelError::Overflow { .. }) => break Classification::Hard { blowup_step: j + 1 },
            Err(e) => return Err(e),
        };
        j += 1;
        let cumulative = points.last().map_or(0.0, |p| p.cumulative_cost);
        points.push(point(j, &state, params.r_mode, cumulative));
    };
    Ok(ModelTrajectory {
        points,
        classification,
    })
}

/// Sum of `m_j²·n_j` over every recorded point. For Hard runs the sum stops
/// at the step that crossed the bound.
pub fn running_time(t: &ModelTrajectory) -> f64 {
    t.points.iter().map(|p| p.step_cost).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn attenuation_cases() {
        for mode in [RMode::FillingExponent, RMode::VariableExponent] {
            assert_eq!(attenuation(17, 0.0, mode), 1.0);
            assert_eq!(attenuation(10, 1.0, mode), 0.5f64.powi(8));
        }
    }

    #[test]
    fn attenuation_negative_exponent() {
        // k = 1 < 2: exponent -1, r = 1/(1 - x²/2)
        let r = attenuation(10, 0.1, RMode::FillingExponent);
        assert!(r > 1.0);
        assert!(rel(r, 1.0 / 0.995) < 1e-14);
    }

    #[test]
    fn frozen_line() {
        let s = ModelState::new(123.0, 40, 0.0).unwrap();
        let (next, _) = step(&s, &ModelParams::default()).unwrap();
        assert_eq!((next.m, next.p(), next.x, next.n), (123.0, 0.0, 0.0, 39));
    }

    #[test]
    fn fixpoint_x_one() {
        let s = ModelState::new(1024.0, 10, 1.0).unwrap();
        let (next, _) = step(&s, &ModelParams::default()).unwrap();
        assert_eq!(next.m, 512.0);
        assert_eq!(next.x, 1.0);
    }

    #[test]
    fn step_precondition() {
        let s = ModelState::new(10.0, 2, 0.5).unwrap();
        assert!(matches!(step(&s, &ModelParams::default()), Err(ModelError::InvalidArgument(_))));
        assert!(ModelState::new(10.0, 5, 1.5).is_err());
    }

    #[test]
    fn redundancy_breakdown() {
        let s = ModelState::new(200.0, 50, 0.1).unwrap();
        let params = ModelParams::default().with_redundancy(0.2, 2.5);
        let (_, b) = step(&s, &params).unwrap();
        assert!(rel(b.m_rem, 0.8 * b.m_new) < 1e-15);
        assert!(rel(b.p_rem, 0.5 * b.p_new) < 1e-15);
        assert!(rel(b.k_rem * 0.8, 0.5 * b.k_new) < 1e-12);

        let (_, b0) = step(&s, &ModelParams::default()).unwrap();
        assert_eq!((b0.m_rem, b0.p_rem), (b0.m_new, b0.p_new));
    }

    #[test]
    fn lambda_ignored_without_alpha() {
        let p = ModelParams::default().with_redundancy(0.0, 50.0);
        assert!(p.validate().is_ok());
        let s = ModelState::new(200.0, 50, 0.1).unwrap();
        assert_eq!(step(&s, &p).unwrap().0, step(&s, &ModelParams::default()).unwrap().0);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::default().with_redundancy(0.5, 2.5).validate().is_err());
        assert!(ModelParams::default().with_redundancy(0.5, 0.9).validate().is_err());
        assert!(ModelParams::default().with_redundancy(1.0, 1.0).validate().is_err());
        assert!(ModelParams::default().with_redundancy(0.5, 2.0).validate().is_ok());
    }

    #[test]
    fn run_rejects_bad_filling() {
        let p = ModelParams::default();
        assert!(run(100.0, 60, 1.5, &p).is_err());
        assert!(run(100.0, 3, 4.0, &p).is_err());
    }

    #[test]
    fn run_records_initial_point_and_prefix_sums() {
        let t = run(100.0, 60, 4.0, &ModelParams::default()).unwrap();
        assert_eq!(t.points[0].j, 0);
        assert_eq!(t.points[0].m, 100.0);
        let mut acc = 0.0;
        for (i, pt) in t.points.iter().enumerate() {
            assert_eq!(pt.j as usize, i);
            assert_eq!(pt.n, 60 - pt.j);
            acc += pt.step_cost;
            assert_eq!(pt.cumulative_cost, acc);
        }
        assert_eq!(running_time(&t), acc);
    }

    #[test]
    fn running_time_single_point() {
        let t = ModelTrajectory {
            points: vec![point(0, &ModelState { m: 2.0, n: 3, x: 0.5 }, RMode::FillingExponent, 0.0)],
            classification: Classification::Exhausted,
        };
        assert_eq!(running_time(&t), 12.0);
    }

    #[test]
    fn exhausted_at_n_two() {
        let t = run(5.0, 2, 2.0, &ModelParams::default()).unwrap();
        assert_eq!(t.classification, Classification::Exhausted);
        assert_eq!(t.points.len(), 1);
    }

    #[test]
    fn hard_run_stops_at_bound() {
        let t = run(2000.0, 40, 3.0, &ModelParams::default()).unwrap();
        let Classification::Hard { blowup_step } = t.classification else {
            panic!("expected Hard, got {:?}", t.classification);
        };
        assert!(blowup_step <= 38);
        let bound = 2000.0 * 2f64.powi(40);
        let last = t.points.last().unwrap();
        assert!(last.m > bound || last.j < blowup_step);
    }

    #[test]
    fn summary_json_shape() {
        let t = run(100.0, 60, 4.0, &ModelParams::default()).unwrap();
        let js = t.summary_json();
        assert_eq!(js["class"], "Easy");
        assert!(js["stop_step"].as_u64().unwrap() < 58);
        assert!(js["running_time"].as_f64().unwrap().is_finite());
    }
}
