//! Parse a DIMACS file (or a built-in formula) and print its statistics and
//! the effect of each reduction.
//!
//!     cargo run --example parse_and_stats -- path/to/file.cnf

use splitlab::cnf::{appearance_profile, compute_stats, parse_dimacs, remove_duplicates, remove_subsumed};

const BUILTIN: &str = "c toy formula with one duplicate and one subsumed clause
p cnf 4 6
1 2 0
-1 3 0
2 3 -4 0
3 2 0
1 2 0
-2 4 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => BUILTIN.to_string(),
    };
    let f = parse_dimacs(&text)?;
    println!("{}", compute_stats(&f).summary_line());

    println!("var  pos  neg");
    for (v, (pos, neg)) in appearance_profile(&f) {
        println!("{v:>3}  {pos:>3}  {neg:>3}");
    }

    let d = remove_duplicates(&f);
    let s = remove_subsumed(&f);
    println!("clauses: {} -> {} without duplicates -> {} without subsumed", f.num_clauses(), d.num_clauses(), s.num_clauses());
    Ok(())
}
