//! Decide a generated formula with SPLIT under each reduction setting and
//! print the per-step clause counts.

use splitlab::gen::{generate, GenSpec};
use splitlab::split::{brute_force, decide, EmpiricalTrajectoryPoint};
use splitlab::ReductionConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = generate(&GenSpec::new(12, 40, 3, 5))?;
    println!("brute force: {}", brute_force(&f)?);

    for cfg in ReductionConfig::combinations() {
        let cfg = cfg.with_budget(20_000);
        let (verdict, traj) = decide(&f, &cfg)?;
        let ms: Vec<String> = traj.iter().map(|p| p.m_j.to_string()).collect();
        println!(
            "taut={:<5} dup={:<5} sub={:<5} {verdict:<6} m_j: {}",
            cfg.drop_tautologies,
            cfg.drop_duplicates,
            cfg.drop_subsumed,
            ms.join(" ")
        );
    }

    let (_, traj) = decide(&f, &ReductionConfig::all())?;
    println!("\n{}", EmpiricalTrajectoryPoint::CSV_HEADER);
    for p in &traj {
        println!("{}", p.csv_row());
    }
    Ok(())
}
