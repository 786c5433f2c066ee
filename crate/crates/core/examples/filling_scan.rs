//! Critical m_c at n = 300 as the clause length k grows.

use splitlab::model::ModelParams;
use splitlab::scan::{scan_k, ScanOptions};

fn main() {
    let ks: Vec<f64> = (3..=8).map(f64::from).collect();
    let opts = ScanOptions { resolution: 1.0, jobs: 4 };
    println!("k,m_c");
    for (k, res) in ks.iter().zip(scan_k(300, &ks, &ModelParams::default(), &opts)) {
        match res {
            Ok(p) => println!("{k},{:.1}", p.m_c),
            Err(e) => println!("{k},{e}"),
        }
    }
}
