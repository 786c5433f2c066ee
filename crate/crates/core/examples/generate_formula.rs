//! Generate a symmetric homogeneous k-SAT formula and print it as DIMACS.
//!
//!     cargo run --example generate_formula -- 60 100 4 7

use splitlab::cnf::{compute_stats, write_dimacs};
use splitlab::gen::{generate, GenSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, default: u64| args.get(i).map_or(Ok(default), |s| s.parse::<u64>());
    let (n, m, k, seed) = (num(0, 60)? as u32, num(1, 100)? as usize, num(2, 4)? as usize, num(3, 7)?);

    let f = generate(&GenSpec::new(n, m, k, seed))?;
    // stats to stderr so stdout stays a clean DIMACS stream
    eprintln!("{}", compute_stats(&f).summary_line());
    print!("{}", write_dimacs(&f));
    Ok(())
}
