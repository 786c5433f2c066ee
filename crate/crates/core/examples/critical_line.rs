//! Critical line m_c(n) at k = 3, its power-law fit, and how the summed
//! clause count grows along the line.

use splitlab::model::ModelParams;
use splitlab::scan::{clause_sum_scaling, fit_power_law, scan_line, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::default();
    let ns: Vec<u32> = (50..=400).step_by(50).collect();
    let opts = ScanOptions { resolution: 1.0, jobs: 4 };
    let line = scan_line(3.0, &ns, &params, &opts)?;
    print!("{}", line.to_csv(&params));

    let fit = fit_power_law(&line)?;
    println!("m_c ~ {:.4} * n^{:.3} (rms log residual {:.3})", fit.prefactor, fit.exponent, fit.residual);

    let scaling = clause_sum_scaling(&line)?;
    println!("log2(sum m_j) grows by {:.3} per variable", scaling.slope);
    Ok(())
}
