//! Options, statistics and errors shared by the dynamic programs.

use crate::expr::{CwExpression, ExprError, RedundantAdd};
use crate::ops::{Direction, Extended, WeightedPartitionSet};
use indexmap::IndexMap;
use rayon::prelude::*;
use std::hash::Hash;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Invalid(#[from] ExprError),
    #[error("expression is not irredundant ({} offending add-edges node(s))", .0.len())]
    NotIrredundant(Vec<RedundantAdd>),
    #[error("{what} supports at most {max} labels, expression declares {k}")]
    TooManyLabels { what: &'static str, k: usize, max: usize },
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("at least one terminal is required")]
    NoTerminals,
    #[error("{0}")]
    InvalidProblem(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Apply rank-based reduction after every transition that needs it.
    pub use_reduce: bool,
    /// Track a vertex set for every table entry.
    pub with_witness: bool,
    /// Reduce the cells of a transition in parallel.
    pub parallel: bool,
    /// Co-variant only: prune indices using the number of edges each vertex still has to receive.
    pub lookahead: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            use_reduce: true,
            with_witness: false,
            parallel: false,
            lookahead: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Expression nodes processed.
    pub dp_nodes: usize,
    /// Largest cell seen after any transition.
    pub max_cell_entries: usize,
    /// Largest number of non-empty cells in one table.
    pub max_table_cells: usize,
    pub reduce_calls: usize,
    pub elapsed_ms: u128,
}

/// Outcome of an optimization: the optimum (infinite when infeasible) and an optional witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub direction: Direction,
    pub optimum: Extended,
    /// Vertex ids (introduction order) of an optimal solution, when requested and feasible.
    pub witness: Option<Vec<u32>>,
    pub stats: Stats,
}

impl SolveResult {
    pub fn is_feasible(&self) -> bool {
        self.optimum.is_finite()
    }
}

pub(crate) type Table<K> = IndexMap<K, WeightedPartitionSet>;

pub(crate) struct Tracker {
    start: Instant,
    pub stats: Stats,
}

impl Tracker {
    pub fn new() -> Self {
        Tracker {
            start: Instant::now(),
            stats: Stats::default(),
        }
    }

    pub fn observe<K>(&mut self, table: &Table<K>) {
        self.stats.dp_nodes += 1;
        self.stats.max_table_cells = self.stats.max_table_cells.max(table.len());
        let largest = table.values().map(WeightedPartitionSet::len).max().unwrap_or(0);
        self.stats.max_cell_entries = self.stats.max_cell_entries.max(largest);
    }

    pub fn finish(mut self) -> Stats {
        self.stats.elapsed_ms = self.start.elapsed().as_millis();
        self.stats
    }
}

/// Checks validity, irredundancy and the label limit of a solver.
pub(crate) fn precheck(expr: &CwExpression, what: &'static str, max: usize) -> Result<(), SolveError> {
    expr.validate()?;
    if expr.k() > max {
        return Err(SolveError::TooManyLabels {
            what,
            k: expr.k(),
            max,
        });
    }
    let report = expr.check_irredundant();
    if !report.is_empty() {
        return Err(SolveError::NotIrredundant(report));
    }
    Ok(())
}

/// Applies `f` to every cell (in parallel if requested), drops empty cells and counts calls.
pub(crate) fn normalize<K, F>(
    table: Table<K>,
    opts: &SolveOptions,
    tracker: &mut Tracker,
    f: F,
) -> Table<K>
where
    K: Hash + Eq + Send,
    F: Fn(&WeightedPartitionSet) -> WeightedPartitionSet + Sync,
{
    if !opts.use_reduce {
        return table.into_iter().filter(|(_, c)| !c.is_empty()).collect();
    }
    tracker.stats.reduce_calls += table.len();
    let cells: Vec<(K, WeightedPartitionSet)> = table.into_iter().collect();
    let reduced: Vec<(K, WeightedPartitionSet)> = if opts.parallel {
        cells.into_par_iter().map(|(k, c)| { let r = f(&c); (k, r) }).collect()
    } else {
        cells.into_iter().map(|(k, c)| { let r = f(&c); (k, r) }).collect()
    };
    reduced.into_iter().filter(|(_, c)| !c.is_empty()).collect()
}

/// Adds `set` into the cell at `key`, creating it if needed.
pub(crate) fn accumulate<K: Hash + Eq>(table: &mut Table<K>, key: K, set: WeightedPartitionSet) {
    if set.is_empty() {
        return;
    }
    match table.get_mut(&key) {
        Some(cell) => cell.absorb(&set),
        None => {
            table.insert(key, set);
        }
    }
}
