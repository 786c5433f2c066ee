//! Iterate the recursion model from m0 = 100, n0 = 60, k0 = 4 and print the
//! clause count per step as CSV.

use splitlab::model::{run, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = run(100.0, 60, 4.0, &ModelParams::default())?;
    print!("{}", t.to_csv());
    eprintln!("{} (peak m = {:.3e})", t.summary_json(), t.peak_m());
    Ok(())
}
