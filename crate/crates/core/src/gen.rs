//! Random symmetric homogeneous k-SAT formulas.
//!
//! Every clause holds exactly `k` distinct variables, every variable occurs
//! `⌊mk/n⌋` or `⌈mk/n⌉` times, and each variable's occurrences are split
//! between the two polarities as evenly as possible.
//!
//! Construction is a configuration model: `mk` literal slots are shuffled and
//! dealt into clauses, then clauses with a repeated variable are repaired by
//! seeded swaps with slots of other clauses. The generator is ChaCha8 seeded
//! from a `u64`, whose output stream is fixed across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{Clause, Formula, Literal};

pub use crate::cnf::appearance_profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: u32,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    pub max_retries: usize,
}

impl GenSpec {
    pub const DEFAULT_MAX_RETRIES: usize = 1_000_000;

    pub fn new(n: u32, m: usize, k: usize, seed: u64) -> Self {
        GenSpec {
            n,
            m,
            k,
            seed,
            max_retries: Self::DEFAULT_MAX_RETRIES,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.k < 2 {
            return Err(GenError::InvalidSpec(format!(
                "k must be >= 2 (got {})",
                self.k
            )));
        }
        if self.k > self.n as usize {
            return Err(GenError::InvalidSpec(format!(
                "k must be <= n (got k={}, n={})",
                self.k, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("clause repair did not converge after {retries} swap attempts")]
    RepairFailed { retries: usize },
}

pub fn generate(spec: &GenSpec) -> Result<Formula, GenError> {
    spec.validate()?;
    let GenSpec { n, m, k, .. } = *spec;
    let total = m * k;
    if total < n as usize {
        log::warn!("m*k = {total} < n = {n}: some variables cannot appear");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // occurrence counts: the first `extra` variables of a shuffled order get
    // one more occurrence
    let mut order: Vec<u32> = (1..=n).collect();
    shuffle(&mut order, &mut rng);
    let base = total / n as usize;
    let extra = total % n as usize;

    let mut slots: Vec<Literal> = Vec::with_capacity(total);
    for (rank, &var) in order.iter().enumerate() {
        let count = base + usize::from(rank < extra);
        let mut positives = count / 2;
        if count % 2 == 1 && rng.gen::<bool>() {
            positives += 1;
        }
        slots.extend(std::iter::repeat_n(Literal::pos(var), positives));
        slots.extend(std::iter::repeat_n(Literal::neg(var), count - positives));
    }
    shuffle(&mut slots, &mut rng);
    repair(&mut slots, k, spec.max_retries, &mut rng)?;

    let clauses = slots.chunks(k).map(|c| Clause::new(c.iter().copied())).collect();
    Ok(Formula::new(n, clauses).expect("generated variables are in range"))
}

fn shuffle<T, R: Rng>(items: &mut [T], rng: &mut R) {
    // Fisher-Yates on u64 draws so the stream does not depend on usize width
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i as u64) as usize;
        items.swap(i, j);
    }
}

/// Repeated-variable count of one clause: `k` minus its distinct variables.
fn conflicts(slots: &[Literal], k: usize, clause: usize) -> usize {
    let chunk = &slots[clause * k..(clause + 1) * k];
    (1..k)
        .filter(|&i| chunk[..i].iter().any(|l| l.var() == chunk[i].var()))
        .count()
}

/// First slot index holding a variable already seen earlier in its clause.
fn find_conflict(slots: &[Literal], k: usize) -> Option<usize> {
    slots.chunks(k).enumerate().find_map(|(c, chunk)| {
        (1..k)
            .find(|&i| chunk[..i].iter().any(|l| l.var() == chunk[i].var()))
            .map(|i| c * k + i)
    })
}

/// Swaps a conflicting slot with a random slot of another clause whenever
/// that does not increase the two clauses' conflict count. Sideways moves
/// let the walk leave plateaus that no single improving swap can fix.
fn repair<R: Rng>(slots: &mut [Literal], k: usize, max_retries: usize, rng: &mut R) -> Result<(), GenError> {
    let clauses = slots.len() / k;
    let mut attempts = 0usize;
    while let Some(bad) = find_conflict(slots, k) {
        if attempts >= max_retries || clauses < 2 {
            return Err(GenError::RepairFailed { retries: attempts });
        }
        attempts += 1;
        let bad_clause = bad / k;
        let other = rng.gen_range(0..slots.len() as u64) as usize;
        let other_clause = other / k;
        if other_clause == bad_clause || slots[bad].var() == slots[other].var() {
            continue;
        }
        let before = conflicts(slots, k, bad_clause) + conflicts(slots, k, other_clause);
        slots.swap(bad, other);
        let after = conflicts(slots, k, bad_clause) + conflicts(slots, k, other_clause);
        if after > before {
            slots.swap(bad, other);
        }
    }
    Ok(())
}
