//! Minimum-weight feedback vertex set via maximum-weight induced forests.
//!
//! Table indices assign each label one of four values: the class meets the
//! forest in no vertex (`G0`), in exactly one (`G1`), or in at least two,
//! either still expecting exactly one future edge-add with a single partner
//! (`G2`) or never again receiving edges towards the forest (`Gm2`). Cells
//! are weighted partitions of the `G1`/`G2` labels plus the extra element 0,
//! which stands for a virtual vertex used to glue the trees of a forest
//! into a single tree.

use crate::expr::{CwExpression, Label, Node};
use crate::ops::{ac_reduce, acjoin, proj, Direction, Entry, Witness, WeightedPartitionSet};
use crate::partition::{GroundSet, Partition};
use crate::solve::{accumulate, normalize, precheck, SolveError, SolveOptions, Stats, Table, Tracker};
use std::fmt;

/// Largest `k` supported by the packed state encoding.
pub const MAX_FVS_LABELS: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gamma {
    G0 = 0,
    G1 = 1,
    G2 = 2,
    Gm2 = 3,
}

impl Gamma {
    pub const ALL: [Gamma; 4] = [Gamma::G0, Gamma::G1, Gamma::G2, Gamma::Gm2];

    fn from_bits(b: u64) -> Gamma {
        Gamma::ALL[(b & 3) as usize]
    }

    /// Labels with these values belong to the cell's ground set.
    fn in_ground(self) -> bool {
        matches!(self, Gamma::G1 | Gamma::G2)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gamma::G0 => "g0",
            Gamma::G1 => "g1",
            Gamma::G2 => "g2",
            Gamma::Gm2 => "g-2",
        })
    }
}

/// A state function `[k] → Gamma`, two bits per label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FvsState(u64);

impl FvsState {
    pub const ZERO: FvsState = FvsState(0);

    pub fn get(self, l: Label) -> Gamma {
        Gamma::from_bits(self.0 >> (2 * l as u32))
    }

    pub fn with(self, l: Label, g: Gamma) -> FvsState {
        let shift = 2 * l as u32;
        FvsState((self.0 & !(3 << shift)) | ((g as u64) << shift))
    }

    pub fn from_values(values: &[Gamma]) -> FvsState {
        values
            .iter()
            .enumerate()
            .fold(FvsState::ZERO, |s, (i, &g)| s.with(i as Label + 1, g))
    }

    fn labels(self) -> impl Iterator<Item = (Label, Gamma)> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let l = (bits.trailing_zeros() / 2) as Label;
            bits &= !(3 << (2 * l as u32));
            Some((l, self.get(l)))
        })
    }

    fn select(self, pred: impl Fn(Gamma) -> bool) -> GroundSet {
        let mut g = GroundSet::EMPTY;
        for (l, v) in self.labels() {
            if pred(v) {
                g = g.with(l);
            }
        }
        g
    }

    /// `s⁻¹({G1, G2}) ∪ {0}`.
    pub fn ground(self) -> GroundSet {
        self.select(Gamma::in_ground).with(0)
    }

    pub fn minus2_labels(self) -> GroundSet {
        self.select(|g| g == Gamma::Gm2)
    }

    pub fn has_g2(self) -> bool {
        self.labels().any(|(_, g)| g == Gamma::G2)
    }
}

impl fmt::Display for FvsState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, (l, g)) in self.labels().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}:{g}")?;
        }
        f.write_str(")")
    }
}

pub type FvsTable = Table<FvsState>;

/// Possible parent values for a label with child values `a` and `b`, or none if incompatible.
pub fn u_agree(a: Gamma, b: Gamma) -> &'static [Gamma] {
    use Gamma::*;
    match (a, b) {
        (G0, x) | (x, G0) => match x {
            G0 => &[G0],
            G1 => &[G1],
            G2 => &[G2],
            Gm2 => &[Gm2],
        },
        (G1, G1) => &[G2, Gm2],
        (G1, G2) | (G2, G1) | (G2, G2) => &[G2],
        (G1, Gm2) | (Gm2, G1) | (Gm2, Gm2) => &[Gm2],
        (G2, Gm2) | (Gm2, G2) => &[],
    }
}

/// Leaf table for a vertex of weight `weight` carrying label 1.
pub fn fvs_leaf(vertex: u32, weight: u64, with_witness: bool) -> FvsTable {
    let mut t = FvsTable::default();
    let ground = GroundSet::from_bits(0b11);
    let witness: Option<Witness> = with_witness.then(|| vec![vertex].into());
    let mut chosen = WeightedPartitionSet::new(ground, Direction::Max);
    for p in [Partition::whole(ground), Partition::singletons(ground)] {
        chosen.insert(p, weight, witness.clone()).expect("same ground");
    }
    t.insert(FvsState::ZERO.with(1, Gamma::G1), chosen);
    let mut empty = WeightedPartitionSet::new(GroundSet::singleton(0), Direction::Max);
    empty
        .insert(
            Partition::whole(GroundSet::singleton(0)),
            0,
            with_witness.then(|| Vec::new().into()),
        )
        .expect("same ground");
    t.insert(FvsState::ZERO, empty);
    t
}

/// `acjoin(A, {({{i,j}}, 0)})` followed by removal of `drop`; `i`, `j` in the ground set.
fn link(a: &WeightedPartitionSet, i: Label, j: Label, drop: GroundSet) -> WeightedPartitionSet {
    proj(&crate::ops::merge_pair(a, i, j, true), drop)
}

/// Moves element `i` of every partition to `j` (not in the ground set).
fn rename(a: &WeightedPartitionSet, i: Label, j: Label) -> WeightedPartitionSet {
    let ground = a.ground().without(i).with(j);
    let mut out = WeightedPartitionSet::new(ground, a.direction());
    for (p, e) in a.iter() {
        let q = p
            .extend(GroundSet::singleton(j))
            .expect("j outside ground")
            .merge_elements(i, j)
            .remove_unchecked(GroundSet::singleton(i));
        out.insert_unchecked(q, e.clone());
    }
    out
}

pub fn fvs_add(table: &FvsTable, i: Label, j: Label) -> FvsTable {
    use Gamma::*;
    let mut out = FvsTable::default();
    for (&s, cell) in table {
        let (a, b) = (s.get(i), s.get(j));
        let (target, set) = match (a, b) {
            (G0, _) | (_, G0) => (s, cell.clone()),
            (G1, G1) => (s, link(cell, i, j, GroundSet::EMPTY)),
            (G2, G1) => (s.with(i, Gm2), link(cell, i, j, GroundSet::singleton(i))),
            (G1, G2) => (s.with(j, Gm2), link(cell, i, j, GroundSet::singleton(j))),
            _ => continue,
        };
        accumulate(&mut out, target, set);
    }
    out
}

/// Relabels `i` to `j`; cells are merged but not yet reduced.
pub fn fvs_ren_unreduced(table: &FvsTable, i: Label, j: Label) -> FvsTable {
    use Gamma::*;
    let mut out = FvsTable::default();
    for (&s, cell) in table {
        let (a, b) = (s.get(i), s.get(j));
        let base = s.with(i, G0);
        if a == G0 {
            accumulate(&mut out, s, cell.clone());
            continue;
        }
        if b == G0 {
            let set = if a == Gm2 { cell.clone() } else { rename(cell, i, j) };
            accumulate(&mut out, base.with(j, a), set);
            continue;
        }
        if matches!(a, G1 | Gm2) && matches!(b, G1 | Gm2) {
            let drop = GroundSet::singleton(i).with(j);
            accumulate(&mut out, base.with(j, Gm2), proj(cell, drop));
        }
        if matches!(a, G1 | G2) && matches!(b, G1 | G2) {
            accumulate(&mut out, base.with(j, G2), link(cell, i, j, GroundSet::singleton(i)));
        }
    }
    out
}

/// Disjoint union; cells are merged but not yet reduced.
pub fn fvs_union_unreduced(ta: &FvsTable, tb: &FvsTable, k: usize) -> FvsTable {
    let mut out = FvsTable::default();
    for (&sa, ca) in ta {
        for (&sb, cb) in tb {
            // Per label: the allowed parent values.
            let mut choices: Vec<(Label, &'static [Gamma])> = Vec::new();
            let mut ok = true;
            for l in 1..=k as Label {
                let opts = u_agree(sa.get(l), sb.get(l));
                if opts.is_empty() {
                    ok = false;
                    break;
                }
                if opts != [Gamma::G0] {
                    choices.push((l, opts));
                }
            }
            if !ok {
                continue;
            }
            let mut counters = vec![0usize; choices.len()];
            loop {
                let s = choices
                    .iter()
                    .zip(&counters)
                    .fold(FvsState::ZERO, |s, ((l, opts), &c)| s.with(*l, opts[c]));
                let drop = s.minus2_labels();
                let pa = proj(ca, drop);
                let pb = proj(cb, drop);
                if !pa.is_empty() && !pb.is_empty() {
                    accumulate(&mut out, s, acjoin(&pa, &pb).expect("both max"));
                }
                // Advance the mixed-radix counter.
                let mut t = 0;
                while t < counters.len() {
                    counters[t] += 1;
                    if counters[t] < choices[t].1.len() {
                        break;
                    }
                    counters[t] = 0;
                    t += 1;
                }
                if t == counters.len() {
                    break;
                }
            }
        }
    }
    out
}

fn ac_reduce_cell(c: &WeightedPartitionSet) -> WeightedPartitionSet {
    ac_reduce(c).expect("fvs cells maximize")
}

pub fn fvs_ren(table: &FvsTable, i: Label, j: Label) -> FvsTable {
    fvs_ren_unreduced(table, i, j)
        .into_iter()
        .map(|(s, c)| (s, ac_reduce_cell(&c)))
        .collect()
}

pub fn fvs_union(ta: &FvsTable, tb: &FvsTable, k: usize) -> FvsTable {
    fvs_union_unreduced(ta, tb, k)
        .into_iter()
        .map(|(s, c)| (s, ac_reduce_cell(&c)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FvsResult {
    pub forest_weight: u64,
    pub fvs_weight: u64,
    /// Vertex ids of an optimal induced forest and of its complement, when requested.
    pub forest: Option<Vec<u32>>,
    pub fvs: Option<Vec<u32>>,
    pub stats: Stats,
}

/// Runs the dynamic program and returns the root table.
pub fn fvs_root_table(
    expr: &CwExpression,
    opts: &SolveOptions,
) -> Result<(FvsTable, Stats), SolveError> {
    precheck(expr, "the feedback vertex set solver", MAX_FVS_LABELS)?;
    let k = expr.k();
    let mut tracker = Tracker::new();
    let mut stack: Vec<FvsTable> = Vec::new();
    let mut vertex = 0u32;
    let bound = (k + 1) << k;
    for node in expr.nodes() {
        let table = match node {
            Node::Introduce { weight, .. } => {
                vertex += 1;
                fvs_leaf(vertex - 1, weight.unwrap_or(1), opts.with_witness)
            }
            Node::AddEdges { i, j } => fvs_add(&stack.pop().expect("validated"), *i, *j),
            Node::Relabel { from, to } => {
                let t = fvs_ren_unreduced(&stack.pop().expect("validated"), *from, *to);
                normalize(t, opts, &mut tracker, ac_reduce_cell)
            }
            Node::Union => {
                let b = stack.pop().expect("validated");
                let a = stack.pop().expect("validated");
                let t = fvs_union_unreduced(&a, &b, k);
                normalize(t, opts, &mut tracker, ac_reduce_cell)
            }
        };
        tracker.observe(&table);
        if opts.use_reduce {
            debug_assert!(table.values().all(|c| c.len() <= bound));
        }
        stack.push(table);
    }
    let root = stack.pop().expect("validated");
    Ok((root, tracker.finish()))
}

/// The best entry `({s⁻¹(G1) ∪ {0}}, w)` over states without `G2`.
pub fn best_forest(root: &FvsTable) -> Option<(u64, Option<Witness>)> {
    let mut best: Option<&Entry> = None;
    for (s, cell) in root {
        if s.has_g2() {
            continue;
        }
        if let Some(e) = cell.get(&Partition::whole(s.ground())) {
            if best.is_none_or(|b| e.weight > b.weight) {
                best = Some(e);
            }
        }
    }
    best.map(|e| (e.weight, e.witness.clone()))
}

/// Minimum-weight feedback vertex set of the graph denoted by an irredundant expression.
pub fn solve_fvs(expr: &CwExpression, opts: &SolveOptions) -> Result<FvsResult, SolveError> {
    let (root, stats) = fvs_root_table(expr, opts)?;
    let total: u64 = expr.vertex_weights().iter().sum();
    let (forest_weight, witness) = best_forest(&root).unwrap_or((0, None));
    let forest = witness.map(|w| w.to_vec());
    let fvs = forest.as_ref().map(|f| {
        (0..expr.num_vertices() as u32)
            .filter(|v| f.binary_search(v).is_err())
            .collect()
    });
    Ok(FvsResult {
        forest_weight,
        fvs_weight: total - forest_weight,
        forest,
        fvs,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::fixtures;
    use Gamma::*;

    fn solve(text: &str) -> FvsResult {
        solve_fvs(&parse_expression(text).unwrap(), &SolveOptions::default()).unwrap()
    }

    fn part(blocks: &[&[u8]]) -> Partition {
        let ground = GroundSet::from_elements(blocks.iter().flat_map(|b| b.iter().copied())).unwrap();
        Partition::canonicalize(blocks.iter().map(|b| b.iter().copied()), ground).unwrap()
    }

    fn weights(cell: &WeightedPartitionSet) -> Vec<(String, u64)> {
        cell.iter().map(|(p, e)| (p.to_string(), e.weight)).collect()
    }

    #[test]
    fn u_agree_has_fifteen_triples() {
        let count: usize = Gamma::ALL
            .iter()
            .flat_map(|&a| Gamma::ALL.iter().map(move |&b| u_agree(a, b).len()))
            .sum();
        assert_eq!(count, 15);
        assert_eq!(u_agree(G1, G1), &[G2, Gm2]);
        assert!(u_agree(G2, Gm2).is_empty());
    }

    #[test]
    fn leaf_table() {
        let t = fvs_leaf(0, 3, false);
        let g1 = &t[&FvsState::ZERO.with(1, G1)];
        assert_eq!(weights(g1), vec![("{{0,1}}".into(), 3), ("{{0},{1}}".into(), 3)]);
        assert_eq!(weights(&t[&FvsState::ZERO]), vec![("{{0}}".into(), 0)]);
        assert!(!t.contains_key(&FvsState::ZERO.with(1, G2)));
        assert!(!t.contains_key(&FvsState::ZERO.with(1, Gm2)));
    }

    fn two_isolated() -> FvsTable {
        // Vertex a with label 1, vertex b with label 2.
        let a = fvs_leaf(0, 1, false);
        let b = fvs_ren(&fvs_leaf(1, 1, false), 1, 2);
        fvs_union(&a, &b, 2)
    }

    #[test]
    fn add_links_two_singletons() {
        let h = two_isolated();
        let s = FvsState::from_values(&[G1, G1]);
        assert!(h[&s].get(&part(&[&[0], &[1], &[2]])).is_some());
        let g = fvs_add(&h, 1, 2);
        assert_eq!(g[&s].get(&part(&[&[0], &[1, 2]])).unwrap().weight, 2);
        // Entries where 1 and 2 were already connected through 0 would close a cycle.
        assert!(g[&s].iter().all(|(p, _)| p.num_blocks() <= 2));
        // States with a G0 label are copied.
        let s0 = FvsState::from_values(&[G1, G0]);
        assert_eq!(g[&s0], h[&s0]);
    }

    #[test]
    fn add_rejects_dense_targets() {
        let h = two_isolated();
        let g = fvs_add(&h, 1, 2);
        assert!(g.keys().all(|s| s.get(1) != G2 && s.get(2) != G2));
    }

    #[test]
    fn ren_merges_classes() {
        let g = fvs_add(&two_isolated(), 1, 2);
        let r = fvs_ren(&g, 2, 1);
        let s = FvsState::from_values(&[Gm2, G0]);
        assert_eq!(weights(&r[&s]), vec![("{{0}}".into(), 2)]);
        // A class that never meets the forest is only re-keyed.
        let single = fvs_ren(&fvs_leaf(0, 5, false), 1, 3);
        assert!(single.contains_key(&FvsState::ZERO.with(3, G1)));
        assert!(single.keys().all(|s| s.get(1) == G0));
    }

    #[test]
    fn union_of_two_unit_vertices() {
        let a = fvs_leaf(0, 1, false);
        let b = fvs_leaf(1, 1, false);
        let t = fvs_union(&a, &b, 1);
        let s = FvsState::ZERO.with(1, Gm2);
        // Only the pair where both vertices hang from 0 survives the projection.
        assert_eq!(weights(&t[&s]), vec![("{{0}}".into(), 2)]);
        let empty = FvsTable::default();
        assert!(fvs_union(&a, &empty, 1).is_empty());
    }

    #[test]
    fn small_graphs() {
        let k3 = "(add 1 2 (u (ren 2 1 (add 1 2 (u (v a 1) (ren 1 2 (v b 1))))) (ren 1 2 (v c 1))))";
        let r = solve(k3);
        assert_eq!((r.forest_weight, r.fvs_weight), (2, 1));
        let r = solve("(v a 5)");
        assert_eq!((r.forest_weight, r.fvs_weight), (5, 0));
        let opts = SolveOptions::default();
        let c4 = solve_fvs(&fixtures::cycle(4), &opts).unwrap();
        assert_eq!(c4.fvs_weight, 1);
        let k4 = solve_fvs(&fixtures::clique(4), &opts).unwrap();
        assert_eq!(k4.fvs_weight, 2);
        let p6 = solve_fvs(&fixtures::path(6), &opts).unwrap();
        assert_eq!(p6.fvs_weight, 0);
    }

    #[test]
    fn witnesses_are_returned() {
        let opts = SolveOptions {
            with_witness: true,
            ..SolveOptions::default()
        };
        let r = solve_fvs(&fixtures::clique(5), &opts).unwrap();
        assert_eq!(r.fvs_weight, 3);
        assert_eq!(r.fvs.as_ref().unwrap().len(), 3);
        assert_eq!(r.forest.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn redundant_expressions_are_rejected() {
        let e = parse_expression("(add 1 2 (add 1 2 (u (v a 1) (ren 1 2 (v b 1)))))").unwrap();
        assert!(matches!(
            solve_fvs(&e, &SolveOptions::default()),
            Err(SolveError::NotIrredundant(_))
        ));
    }
}
