#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splitlab::{Clause, Formula, Literal};

/// Clauses of random length `1..=max_len` over `1..=n`, possibly with
/// repeated variables, tautologies and duplicate clauses.
pub fn random_formula(rng: &mut ChaCha8Rng, n: u32, m: usize, max_len: usize) -> Formula {
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Clause::new((0..len).map(|_| Literal::new(rng.gen_range(1..=n), rng.gen())))
        })
        .collect();
    Formula::new(n, clauses).unwrap()
}

pub fn cl(v: &[i64]) -> Clause {
    Clause::from_dimacs(v)
}

pub fn formula(num_vars: u32, cs: &[&[i64]]) -> Formula {
    Formula::new(num_vars, cs.iter().map(|c| cl(c)).collect()).unwrap()
}

/// Hand-built edge cases for SPLIT.
pub fn hand_cases() -> Vec<Formula> {
    vec![
        formula(0, &[]),
        formula(3, &[]),
        formula(1, &[&[]]),
        formula(2, &[&[1], &[-1]]),
        formula(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]),
        formula(3, &[&[1, 2, 3]]),
        formula(2, &[&[1, 2], &[-1, -2]]),
        formula(3, &[&[1, 2], &[-1, 3], &[2, 3]]),
        formula(2, &[&[1, 2], &[-1], &[-2]]),
        formula(2, &[&[1, -1]]),
        formula(3, &[&[1, -1, 2], &[-2], &[3]]),
        formula(4, &[&[1, 2], &[1, 2], &[2, 1], &[-1, 3], &[-3, 4], &[-4, -2]]),
        formula(3, &[&[1], &[-1, 2], &[-2, 3], &[-3]]),
        formula(5, &[&[2, 3], &[4, 5]]),
        formula(3, &[&[1, 2, 3], &[1, 2], &[1]]),
    ]
}
