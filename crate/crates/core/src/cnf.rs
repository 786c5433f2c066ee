//! CNF formulas: literals, clauses, DIMACS I/O, literal statistics and the
//! polynomial-time clause reductions (tautologies, duplicates, subsumption).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A literal over a 1-based variable index.
///
/// The derived ordering is `(variable, polarity)` with the negative literal
/// first, which is the canonical order used inside every [`Clause`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    /// # Panics
    /// If `var` is zero.
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(var, false)
    }

    /// Build from a signed DIMACS integer; `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = u32::try_from(value.unsigned_abs()).ok()?;
        Some(Literal::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            i64::from(self.var)
        } else {
            -i64::from(self.var)
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals kept sorted and free of exact duplicates.
///
/// Two clauses with the same literal set compare equal. The empty clause is
/// FALSE.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause(lits)
    }

    pub fn empty() -> Self {
        Clause(Vec::new())
    }

    /// Convenience constructor from DIMACS-style integers. Zeros are ignored.
    pub fn from_dimacs(values: &[i64]) -> Self {
        Clause::new(values.iter().filter_map(|&v| Literal::from_dimacs(v)))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn mentions(&self, var: u32) -> bool {
        self.contains(Literal::neg(var)) || self.contains(Literal::pos(var))
    }

    pub fn max_var(&self) -> u32 {
        self.0.last().map_or(0, |l| l.var)
    }

    /// The clause with every literal of `var` removed.
    pub fn without_var(&self, var: u32) -> Clause {
        Clause(self.0.iter().copied().filter(|l| l.var != var).collect())
    }

    /// `self ⊆ other` as literal sets.
    pub fn is_subset_of(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for lit in &self.0 {
            for candidate in rest.by_ref() {
                match candidate.cmp(lit) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// True iff some variable occurs in both polarities.
    pub fn is_tautological(&self) -> bool {
        // complementary literals are adjacent in canonical order
        self.0.windows(2).any(|w| w[0].var == w[1].var)
    }

    /// Whether `assignment[var]` satisfies the clause. Index 0 is unused.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.0
            .iter()
            .any(|l| assignment[l.var as usize] == l.positive)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.0 {
            write!(f, "{lit} ")?;
        }
        write!(f, "0")
    }
}

/// Result of disjoining two clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disjunction {
    Clause(Clause),
    Tautology,
}

/// True iff `c` contains some variable with both polarities.
pub fn is_tautological(c: &Clause) -> bool {
    c.is_tautological()
}

/// Literal-set union of two clauses, or [`Disjunction::Tautology`] when the
/// union contains a complementary pair.
pub fn disjoin(y: &Clause, z: &Clause) -> Disjunction {
    let (a, b) = (y.literals(), z.literals());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&w)) if x == w => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&w)) if x < w => {
                i += 1;
                x
            }
            (Some(_), Some(&w)) => {
                j += 1;
                w
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&w)) => {
                j += 1;
                w
            }
            (None, None) => unreachable!(),
        };
        if out.last().is_some_and(|prev: &Literal| prev.var == next.var) {
            return Disjunction::Tautology;
        }
        out.push(next);
    }
    Disjunction::Clause(Clause(out))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause} mentions variable {var} but the formula declares only {num_vars}")]
    VariableOutOfRange { clause: usize, var: u32, num_vars: u32 },
}

/// A conjunction of clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for (idx, c) in clauses.iter().enumerate() {
            if c.max_var() > num_vars {
                return Err(FormulaError::VariableOutOfRange {
                    clause: idx,
                    var: c.max_var(),
                    num_vars,
                });
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    /// Builds a formula whose `num_vars` is the largest variable mentioned.
    pub fn from_clauses(clauses: Vec<Clause>) -> Self {
        let num_vars = clauses.iter().map(Clause::max_var).max().unwrap_or(0);
        Formula { num_vars, clauses }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Variables that occur in at least one clause, ascending.
    pub fn active_vars(&self) -> Vec<u32> {
        let mut seen = vec![false; self.num_vars as usize + 1];
        for lit in self.clauses.iter().flat_map(|c| c.literals()) {
            seen[lit.var as usize] = true;
        }
        (1..=self.num_vars).filter(|&v| seen[v as usize]).collect()
    }

    /// Direct evaluation under a full assignment (`assignment[0]` unused).
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(assignment))
    }

    pub(crate) fn with_clauses(&self, clauses: Vec<Clause>) -> Formula {
        Formula {
            num_vars: self.num_vars,
            clauses,
        }
    }
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing 'p cnf <n> <m>' header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid literal '{0}'")]
    InvalidLiteral(String),
    #[error("literal {lit} exceeds declared variable count {num_vars}")]
    VariableOutOfRange { lit: i64, num_vars: u32 },
    #[error("last clause is not terminated by 0")]
    MissingTerminator,
}

/// Parses DIMACS CNF. Clauses may span lines; duplicate literals inside a
/// clause are merged. A clause-count mismatch with the header is tolerated.
pub fn parse_dimacs(text: &str) -> Result<Formula, ParseError> {
    let mut num_vars: Option<u32> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_since = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            // SATLIB end marker
            break;
        }
        if line.starts_with('p') {
            if num_vars.is_some() {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::MalformedHeader("duplicate header".into()),
                });
            }
            num_vars = Some(parse_header(line).map_err(|kind| ParseError {
                line: line_no,
                kind,
            })?);
            continue;
        }
        let Some(n) = num_vars else {
            return Err(ParseError {
                line: line_no,
                kind: ParseErrorKind::MissingHeader,
            });
        };
        for tok in line.split_whitespace() {
            let value: i64 = tok.parse().map_err(|_| ParseError {
                line: line_no,
                kind: ParseErrorKind::InvalidLiteral(tok.to_string()),
            })?;
            if value == 0 {
                clauses.push(Clause::new(current.drain(..)));
                continue;
            }
            if current.is_empty() {
                open_since = line_no;
            }
            if value.unsigned_abs() > u64::from(n) {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::VariableOutOfRange {
                        lit: value,
                        num_vars: n,
                    },
                });
            }
            current.push(Literal::from_dimacs(value).expect("nonzero"));
        }
    }

    let Some(num_vars) = num_vars else {
        return Err(ParseError {
            line: last_line.max(1),
            kind: ParseErrorKind::MissingHeader,
        });
    };
    if !current.is_empty() {
        return Err(ParseError {
            line: open_since,
            kind: ParseErrorKind::MissingTerminator,
        });
    }
    Ok(Formula { num_vars, clauses })
}

fn parse_header(line: &str) -> Result<u32, ParseErrorKind> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", n, m] => {
            let n = n
                .parse::<u32>()
                .map_err(|_| ParseErrorKind::MalformedHeader(format!("bad variable count '{n}'")))?;
            m.parse::<u64>()
                .map_err(|_| ParseErrorKind::MalformedHeader(format!("bad clause count '{m}'")))?;
            Ok(n)
        }
        _ => Err(ParseErrorKind::MalformedHeader(line.to_string())),
    }
}

/// Writes `p cnf <n> <m>` followed by one clause per line ending in ` 0`
/// (the empty clause is the bare line `0`).
pub fn write_dimacs(f: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// Literal statistics of a formula.
///
/// For `m = 0` the stats are vacuous: means are zero and `x` is `None`.
/// `x` is also `None` when clauses exist but no variable occurs (all empty).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaStats {
    pub m: usize,
    pub n_active: usize,
    pub k_mean: f64,
    pub p_mean: f64,
    pub x: Option<f64>,
    pub total_literals: usize,
    pub max_symmetry_imbalance: usize,
    #[serde(skip)]
    pub appearances: BTreeMap<u32, (usize, usize)>,
}

impl FormulaStats {
    pub fn is_vacuous(&self) -> bool {
        self.m == 0
    }

    pub fn summary_line(&self) -> String {
        let x = self
            .x
            .map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"));
        format!(
            "m={} n_active={} k_mean={:.6} p_mean={:.6} x={} total_literals={} max_imbalance={}",
            self.m,
            self.n_active,
            self.k_mean,
            self.p_mean,
            x,
            self.total_literals,
            self.max_symmetry_imbalance
        )
    }
}

/// Map variable → (positive occurrences, negative occurrences), for
/// variables that occur at all.
pub fn appearance_profile(f: &Formula) -> BTreeMap<u32, (usize, usize)> {
    let mut map: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for lit in f.clauses.iter().flat_map(|c| c.literals()) {
        let entry = map.entry(lit.var).or_default();
        if lit.positive {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    map
}

pub fn compute_stats(f: &Formula) -> FormulaStats {
    let appearances = appearance_profile(f);
    let m = f.clauses.len();
    let total_literals: usize = f.clauses.iter().map(Clause::len).sum();
    let by_variable: usize = appearances.values().map(|(p, n)| p + n).sum();
    assert_eq!(
        total_literals, by_variable,
        "literal conservation violated"
    );
    let n_active = appearances.len();
    let max_symmetry_imbalance = appearances
        .values()
        .map(|&(p, n)| p.abs_diff(n))
        .max()
        .unwrap_or(0);
    let k_mean = if m == 0 {
        0.0
    } else {
        total_literals as f64 / m as f64
    };
    let p_mean = if n_active == 0 {
        0.0
    } else {
        total_literals as f64 / n_active as f64
    };
    let x = (m > 0 && n_active > 0).then(|| p_mean / m as f64);
    FormulaStats {
        m,
        n_active,
        k_mean,
        p_mean,
        x,
        total_literals,
        max_symmetry_imbalance,
        appearances,
    }
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

/// Keeps the first occurrence of every distinct clause.
pub fn remove_duplicates(f: &Formula) -> Formula {
    let keep = first_occurrences(f.clauses());
    f.with_clauses(select(f.clauses(), &keep))
}

/// Drops every clause that contains another clause of the formula, and all
/// but the first copy of repeated clauses. The result is an antichain under
/// `⊆`.
pub fn remove_subsumed(f: &Formula) -> Formula {
    let keep = subsumption_survivors(f.clauses());
    f.with_clauses(select(f.clauses(), &keep))
}

pub(crate) fn select(clauses: &[Clause], keep: &[bool]) -> Vec<Clause> {
    clauses
        .iter()
        .zip(keep)
        .filter(|(_, &k)| k)
        .map(|(c, _)| c.clone())
        .collect()
}

pub(crate) fn first_occurrences(clauses: &[Clause]) -> Vec<bool> {
    let mut seen: HashSet<&Clause> = HashSet::with_capacity(clauses.len());
    clauses.iter().map(|c| seen.insert(c)).collect()
}

/// Survivor mask for subsumption. A clause survives iff it is the first copy
/// of its literal set and no other clause is a strict subset of it. Strict
/// subsumption is transitive, so checking against all clauses (survivors or
/// not) gives the same answer as checking against survivors only.
pub(crate) fn subsumption_survivors(clauses: &[Clause]) -> Vec<bool> {
    let mut keep = first_occurrences(clauses);
    let mut by_len: Vec<usize> = (0..clauses.len()).filter(|&i| keep[i]).collect();
    by_len.sort_by_key(|&i| clauses[i].len());

    for (pos, &b) in by_len.iter().enumerate() {
        let big = &clauses[b];
        // only strictly shorter clauses can be strict subsets
        let subsumed = by_len[..pos]
            .iter()
            .take_while(|&&a| clauses[a].len() < big.len())
            .any(|&a| clauses[a].is_subset_of(big));
        if subsumed {
            keep[b] = false;
        }
    }
    keep
}
