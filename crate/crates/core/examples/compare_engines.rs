//! Run SPLIT on generated formulas and the model from the same (m, n, k),
//! then print the aggregate divergence metrics.

use splitlab::compare::{compare, CompareSpec};
use splitlab::{ModelParams, ReductionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = CompareSpec {
        n: 20,
        m: 60,
        k: 3,
        seed: 1,
        trials: 20,
        reductions: ReductionConfig::all(),
        params: ModelParams::default(),
        jobs: 4,
    };
    let report = compare(&spec)?;
    for t in &report.trials {
        println!(
            "trial {:>2} seed {:>2}: {:<6} model {:<9} max gap {:.2} diverges at {:?}",
            t.trial,
            t.seed,
            t.verdict.to_string(),
            t.classification.name(),
            t.max_rel_gap,
            t.first_divergence
        );
    }
    println!("{}", serde_json::to_string_pretty(&report.aggregate)?);
    Ok(())
}
