use proptest::prelude::*;
use splitlab::model::{attenuation, run, running_time, step, Classification, ModelParams, ModelState, RMode};

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// The ratio form of the recursion, written out independently of `step`.
fn ratio_form(m: f64, n: u32, x: f64, mode: RMode) -> (f64, f64) {
    let r = attenuation(n, x, mode);
    let q = m * x * x / 4.0 * r;
    let denom = 1.0 - x + q * (1.0 - x * x / 2.0);
    let m_next = m * denom;
    let x_next = x * (1.0 - x + q * (2.0 - 1.5 * x)) / denom;
    (m_next, x_next)
}

#[test]
fn step_matches_extended_precision_oracle() {
    // 50-digit evaluation of the recursion at (m=100, n=60, x=1/15)
    let s = ModelState::from_filling(100.0, 60, 4.0).unwrap();
    let (next, _) = step(&s, &ModelParams::default()).unwrap();
    assert!(rel_err(next.m, 104.370_534_857_491_236_092) < 1e-13);
    assert!(rel_err(next.p(), 7.623_381_435_756_744_398_7) < 1e-13);
    assert!(rel_err(next.x, 0.073_041_509_715_034_033_908) < 1e-13);
    assert_eq!(next.n, 59);

    let (v, _) = step(&s, &ModelParams::default().with_r_mode(RMode::VariableExponent)).unwrap();
    assert!(rel_err(v.m, 103.077_692_809_568_588_171) < 1e-13);
    assert!(rel_err(v.x, 0.072_365_383_024_367_168_204) < 1e-13);
}

#[test]
fn fixpoint_family_both_modes() {
    for mode in [RMode::FillingExponent, RMode::VariableExponent] {
        for n in 5..=30u32 {
            let s = ModelState::new(2f64.powi(n as i32), n, 1.0).unwrap();
            let (next, _) = step(&s, &ModelParams::default().with_r_mode(mode)).unwrap();
            assert!(rel_err(next.m, 2f64.powi(n as i32 - 1)) < 1e-9);
            assert!(rel_err(next.x, 1.0) < 1e-9);
        }
    }
}

#[test]
fn redundancy_can_shrink_filling() {
    // existence on a coarse grid, not universality
    let params = ModelParams::default().with_redundancy(0.3, 3.0);
    let mut found = false;
    'grid: for n in [10u32, 30, 100] {
        for xi in 1..20 {
            for m in [10.0, 100.0, 1000.0] {
                let s = ModelState::new(m, n, f64::from(xi) / 20.0).unwrap();
                let (next, _) = step(&s, &params).unwrap();
                if next.x < s.x {
                    found = true;
                    break 'grid;
                }
            }
        }
    }
    assert!(found);
}

#[test]
fn reference_run_deterministic() {
    let p = ModelParams::default();
    let a = run(100.0, 60, 4.0, &p).unwrap();
    let b = run(100.0, 60, 4.0, &p).unwrap();
    assert_eq!(running_time(&a).to_bits(), running_time(&b).to_bits());
    assert!(matches!(a.classification, Classification::Easy { stop_step } if stop_step < 58));
}

#[test]
fn transition_sides_at_388() {
    let p = ModelParams::default();
    assert!(run(388.0, 80, 3.0, &p).unwrap().classification.is_hard());
    assert!(run(388.0, 130, 3.0, &p).unwrap().classification.is_easy());
}

fn valid_state() -> impl Strategy<Value = (f64, u32, f64)> {
    (1.0f64..1e6, 3u32..400, 1e-6f64..=1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn closure_identity_and_bounds((m, n, x) in valid_state(), variable in any::<bool>()) {
        let mode = if variable { RMode::VariableExponent } else { RMode::FillingExponent };
        let s = ModelState::new(m, n, x).unwrap();
        let (next, _) = step(&s, &ModelParams::default().with_r_mode(mode)).unwrap();
        let p = s.p();
        let r = attenuation(n, x, mode);
        let lhs = next.m - next.p();
        let rhs = (1.0 - x) * (m - p) + p * p / 4.0 * r * (1.0 - x).powi(2);
        // the subtraction m' − p' loses absolute precision relative to m'
        prop_assert!((lhs - rhs).abs() <= 1e-12 * next.m.max(rhs.abs()).max(1.0));
        prop_assert!(next.p() <= next.m * (1.0 + 1e-15));
        prop_assert!(next.x <= 1.0);
        prop_assert!(next.x >= x * (1.0 - 1e-14));
    }

    #[test]
    fn ratio_form_agrees((m, n, x) in valid_state(), variable in any::<bool>()) {
        let mode = if variable { RMode::VariableExponent } else { RMode::FillingExponent };
        let s = ModelState::new(m, n, x).unwrap();
        let (next, _) = step(&s, &ModelParams::default().with_r_mode(mode)).unwrap();
        let (m2, x2) = ratio_form(m, n, x, mode);
        prop_assert!(rel_err(next.m, m2) < 1e-12);
        prop_assert!(rel_err(next.x, x2) < 1e-12);
    }

    #[test]
    fn frozen_line(m in 0.0f64..1e9, n in 3u32..1000) {
        let s = ModelState::new(m, n, 0.0).unwrap();
        let (next, _) = step(&s, &ModelParams::default()).unwrap();
        prop_assert_eq!(next.m, m);
        prop_assert_eq!(next.x, 0.0);
    }

    #[test]
    fn redundancy_consistency(
        (m, n, x) in valid_state(),
        alpha in 0.001f64..=0.5,
        t in 0.0f64..=1.0,
    ) {
        let lambda = 1.0 + t * (1.0 / alpha - 1.0);
        let params = ModelParams::default().with_redundancy(alpha, lambda);
        let s = ModelState::new(m, n, x).unwrap();
        let (next, b) = step(&s, &params).unwrap();
        prop_assert!(rel_err(b.p_rem, (1.0 - alpha * lambda) * b.p_new) < 1e-12);
        prop_assert!(rel_err(b.m_rem, (1.0 - alpha) * b.m_new) < 1e-12);
        if b.m_new > 0.0 && b.p_rem > 0.0 {
            prop_assert!(rel_err(b.k_rem * (1.0 - alpha), (1.0 - alpha * lambda) * b.k_new) < 1e-12);
        }
        prop_assert!(next.x <= 1.0);
    }

    #[test]
    fn counting_identities(p in 1e-3f64..1e6, x in 1e-6f64..=1.0) {
        let a = x * p / 4.0;
        let mixed = 2.0 * a * a + 4.0 * a * (1.0 - x) * p / 2.0;
        let first = mixed + p * p / 4.0 * (1.0 - x).powi(2);
        prop_assert!(rel_err(first, p * p / 4.0 * (1.0 - x * x / 2.0)) < 1e-12);
        prop_assert!(rel_err(mixed, p * p / 4.0 * (2.0 * x - 1.5 * x * x)) < 1e-12);
    }
}
