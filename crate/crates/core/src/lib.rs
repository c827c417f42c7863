//! Exact solvers for connectivity problems on graphs given by clique-width expressions.
//!
//! The dynamic programs keep, per table index, a set of weighted partitions
//! of the label classes and prune it with rank-based reduction so that cell
//! sizes stay single-exponential in the number of labels.

pub mod expr;
pub mod fixtures;
pub mod fvs;
pub mod graph;
pub mod ops;
pub mod oracle;
pub mod partition;
pub mod sigma_rho;
pub mod solve;

pub use expr::{parse_expression, CwExpression, ExprError, LabeledGraph, Node};
pub use graph::Graph;
pub use ops::{Direction, Extended, WeightedPartitionSet};
pub use partition::{GroundSet, Partition};
pub use solve::{SolveError, SolveOptions, SolveResult, Stats};
