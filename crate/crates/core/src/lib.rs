//! A laboratory for the easy/hard efficiency transition of SPLIT, the
//! variable-elimination SAT procedure.
//!
//! - [`cnf`]: formulas, DIMACS I/O, literal statistics, clause reductions
//! - [`gen`]: symmetric homogeneous random k-SAT formulas
//! - [`split`]: exact SPLIT with reductions, budgets and trajectories
//! - [`model`]: the mean-field recursion for `(m, n, x)` and its classification
//! - [`scan`]: critical points, critical lines and power-law fits
//! - [`compare`]: SPLIT on generated formulas joined against the model
//! - [`cli`]: the `splitlab` command line

pub mod cli;
pub mod cnf;
pub mod compare;
pub mod gen;
pub mod model;
pub mod scan;
pub mod split;

pub use cnf::{Clause, Formula, FormulaStats, Literal};
pub use model::{Classification, ModelParams, ModelState, ModelTrajectory, RMode};
pub use scan::{CriticalLine, CriticalPoint, PowerLawFit};
pub use split::{ReductionConfig, Verdict};
