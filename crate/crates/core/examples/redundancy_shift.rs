//! Shift of the critical line when a fraction alpha of the new clauses is
//! removed as redundant, with lambda scaling their share of literals.

use splitlab::model::ModelParams;
use splitlab::scan::{scan_line, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ns = [100, 150, 200, 250, 300];
    let opts = ScanOptions { resolution: 1.0, jobs: 4 };
    let settings = [(0.0, 1.0), (0.1, 1.0), (0.011, 1.5)];

    let mut lines = Vec::new();
    for (alpha, lambda) in settings {
        let params = ModelParams::default().with_redundancy(alpha, lambda);
        lines.push(scan_line(3.0, &ns, &params, &opts)?);
    }
    println!("n,m_c(a=0),m_c(a=0.1,l=1),m_c(a=0.011,l=1.5)");
    for (i, n) in ns.iter().enumerate() {
        let mc: Vec<String> = lines.iter().map(|l| format!("{:.1}", l.points[i].m_c)).collect();
        println!("{n},{}", mc.join(","));
    }
    Ok(())
}
