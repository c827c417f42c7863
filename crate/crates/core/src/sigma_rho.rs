//! Optimum connected (σ,ρ)-dominating sets, node-weighted Steiner trees and
//! connected co-(σ,ρ)-dominating sets.
//!
//! A table index records, per label, the solution count truncated at `d`
//! (`r`) and the number of solution neighbours the class still expects from
//! later edge-adds (`rp`). The co variant dominates with the complement `Y`
//! of the connected set `X`: `r`/`rp` then describe `Y`, and two extra bits
//! (`rb`/`rbp`) describe `X` for the connectivity bookkeeping.
//!
//! Labels whose class is empty at a node have all four fields set to 0 and
//! match any value (they are wildcards). In the co variant `rbp` is
//! likewise a wildcard, stored as 0, for classes that contain no `X` vertex.

use crate::expr::{CwExpression, Label, Node};
use crate::ops::{join_sets, reduce, Direction, Extended, Witness, WeightedPartitionSet};
use crate::partition::{GroundSet, Partition};
use crate::solve::{accumulate, normalize, precheck, SolveError, SolveOptions, SolveResult, Table, Tracker};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest `k` supported by the packed index encoding.
pub const MAX_DOM_LABELS: usize = 15;
/// Largest supported truncation threshold.
pub const MAX_D: u8 = 15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MuError {
    #[error("the empty set is not allowed")]
    Empty,
    #[error("cannot parse set `{0}` (expected N, N+, {{a,b,..}} or N\\{{a,b,..}})")]
    Syntax(String),
    #[error("truncation threshold {d} is below d(μ) = {need}")]
    ThresholdTooSmall { d: u32, need: u32 },
}

/// A non-empty finite or co-finite subset of ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MuSet {
    Finite(BTreeSet<u32>),
    /// All naturals except the listed ones.
    Cofinite(BTreeSet<u32>),
}

impl MuSet {
    pub fn naturals() -> MuSet {
        MuSet::Cofinite(BTreeSet::new())
    }

    pub fn positive() -> MuSet {
        MuSet::Cofinite([0].into())
    }

    pub fn finite(values: impl IntoIterator<Item = u32>) -> Result<MuSet, MuError> {
        let s: BTreeSet<u32> = values.into_iter().collect();
        if s.is_empty() {
            return Err(MuError::Empty);
        }
        Ok(MuSet::Finite(s))
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u32>) -> MuSet {
        MuSet::Cofinite(excluded.into_iter().collect())
    }

    pub fn contains(&self, x: u32) -> bool {
        match self {
            MuSet::Finite(s) => s.contains(&x),
            MuSet::Cofinite(s) => !s.contains(&x),
        }
    }

    pub fn is_naturals(&self) -> bool {
        matches!(self, MuSet::Cofinite(s) if s.is_empty())
    }
}

/// Threshold beyond which membership in `mu` no longer changes.
pub fn d_of(mu: &MuSet) -> Result<u32, MuError> {
    match mu {
        MuSet::Finite(s) => s.iter().next_back().map(|m| m + 1).ok_or(MuError::Empty),
        MuSet::Cofinite(s) => Ok(s.iter().next_back().map_or(0, |m| m + 1)),
    }
}

/// `min(d, x) ∈ mu`, which equals `x ∈ mu` whenever `d ≥ d(mu)`.
pub fn mu_contains_truncated(mu: &MuSet, x: u32, d: u32) -> Result<bool, MuError> {
    let need = d_of(mu)?;
    if d < need {
        return Err(MuError::ThresholdTooSmall { d, need });
    }
    Ok(mu.contains(x.min(d)))
}

impl fmt::Display for MuSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u32>| s.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            MuSet::Finite(s) => write!(f, "{{{}}}", list(s)),
            MuSet::Cofinite(s) if s.is_empty() => f.write_str("N"),
            MuSet::Cofinite(s) if s.len() == 1 && s.contains(&0) => f.write_str("N+"),
            MuSet::Cofinite(s) => write!(f, "N\\{{{}}}", list(s)),
        }
    }
}

impl FromStr for MuSet {
    type Err = MuError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || MuError::Syntax(text.to_string());
        let list = |inner: &str| -> Result<BTreeSet<u32>, MuError> {
            let body = inner
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(err)?;
            if body.is_empty() {
                return Ok(BTreeSet::new());
            }
            body.split(',')
                .map(|v| v.parse::<u32>().map_err(|_| err()))
                .collect()
        };
        match t.as_str() {
            "N" => Ok(MuSet::naturals()),
            "N+" => Ok(MuSet::positive()),
            _ if t.starts_with("N\\") => Ok(MuSet::Cofinite(list(&t[2..])?)),
            _ if t.starts_with('{') => MuSet::finite(list(&t)?),
            _ => t.parse::<u32>().map(|v| MuSet::Finite([v].into())).map_err(|_| err()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    /// The solution itself must be connected.
    Plain,
    /// Plain with σ = ℕ⁺, ρ = ℕ, forcing the named terminals into the solution.
    Steiner(Vec<String>),
    /// The complement of a (σ,ρ)-dominating set must be connected.
    Co,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaRhoSpec {
    pub sigma: MuSet,
    pub rho: MuSet,
    pub direction: Direction,
    pub variant: Variant,
}

impl SigmaRhoSpec {
    pub fn new(sigma: MuSet, rho: MuSet, direction: Direction, variant: Variant) -> Self {
        SigmaRhoSpec {
            sigma,
            rho,
            direction,
            variant,
        }
    }

    /// Connected dominating set.
    pub fn cds() -> Self {
        Self::new(MuSet::naturals(), MuSet::positive(), Direction::Min, Variant::Plain)
    }

    /// Connected total dominating set.
    pub fn ctds() -> Self {
        Self::new(MuSet::positive(), MuSet::positive(), Direction::Min, Variant::Plain)
    }

    /// Connected perfect dominating set.
    pub fn perfect_cds() -> Self {
        Self::new(MuSet::naturals(), MuSet::Finite([1].into()), Direction::Min, Variant::Plain)
    }

    /// Connected induced `degree`-regular subgraph (maximized).
    pub fn d_regular(degree: u32) -> Self {
        Self::new(MuSet::Finite([degree].into()), MuSet::naturals(), Direction::Max, Variant::Plain)
    }

    /// Connected vertex cover: a connected set whose complement is independent.
    pub fn cvc() -> Self {
        Self::new(MuSet::Finite([0].into()), MuSet::naturals(), Direction::Min, Variant::Co)
    }

    /// Node-weighted Steiner tree for the given terminals.
    pub fn steiner(terminals: Vec<String>) -> Self {
        Self::new(MuSet::positive(), MuSet::naturals(), Direction::Min, Variant::Steiner(terminals))
    }

    /// `max(1, d(σ), d(ρ))`.
    pub fn d(&self) -> Result<u32, MuError> {
        Ok(d_of(&self.sigma)?.max(d_of(&self.rho)?).max(1))
    }

    pub fn is_co(&self) -> bool {
        self.variant == Variant::Co
    }
}

/// Packed `(R, R', R̄, R̄')`: four bits per label for `R`, `R'`, one bit for `R̄`, `R̄'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DomIndex {
    r: u64,
    rp: u64,
    rb: u32,
    rbp: u32,
}

impl DomIndex {
    pub fn r(self, l: Label) -> u8 {
        (self.r >> (4 * l as u32) & 15) as u8
    }

    pub fn rp(self, l: Label) -> u8 {
        (self.rp >> (4 * l as u32) & 15) as u8
    }

    pub fn rb(self, l: Label) -> u8 {
        (self.rb >> l & 1) as u8
    }

    pub fn rbp(self, l: Label) -> u8 {
        (self.rbp >> l & 1) as u8
    }

    pub fn with_r(mut self, l: Label, v: u8) -> Self {
        let s = 4 * l as u32;
        self.r = (self.r & !(15 << s)) | ((v as u64) << s);
        self
    }

    pub fn with_rp(mut self, l: Label, v: u8) -> Self {
        let s = 4 * l as u32;
        self.rp = (self.rp & !(15 << s)) | ((v as u64) << s);
        self
    }

    pub fn with_rb(mut self, l: Label, v: u8) -> Self {
        self.rb = (self.rb & !(1 << l)) | ((v as u32 & 1) << l);
        self
    }

    pub fn with_rbp(mut self, l: Label, v: u8) -> Self {
        self.rbp = (self.rbp & !(1 << l)) | ((v as u32 & 1) << l);
        self
    }

    /// Resets every field of label `l` (its class became empty).
    fn cleared(self, l: Label) -> Self {
        self.with_r(l, 0).with_rp(l, 0).with_rb(l, 0).with_rbp(l, 0)
    }

    pub fn rp_is_zero(self) -> bool {
        self.rp == 0 && self.rbp == 0
    }

    pub fn r_is_zero(self) -> bool {
        self.r == 0
    }

    /// Builds a plain-variant index from per-label values (label 1 first).
    pub fn from_plain(r: &[u8], rp: &[u8]) -> Self {
        let mut idx = DomIndex::default();
        for (n, (&a, &b)) in r.iter().zip(rp).enumerate() {
            idx = idx.with_r(n as Label + 1, a).with_rp(n as Label + 1, b);
        }
        idx
    }
}

impl fmt::Display for DomIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for l in 1..=MAX_DOM_LABELS as Label {
            let (a, b, c, e) = (self.r(l), self.rp(l), self.rb(l), self.rbp(l));
            if a | b | c | e != 0 {
                write!(f, " {l}:{a}/{b}")?;
                if c | e != 0 {
                    write!(f, "|{c}/{e}")?;
                }
            }
        }
        write!(f, " ]")
    }
}

/// Cells keyed by index plus the set of labels whose class is non-empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomTable {
    pub present: GroundSet,
    pub cells: Table<DomIndex>,
}

impl DomTable {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, idx: &DomIndex) -> Option<&WeightedPartitionSet> {
        self.cells.get(idx)
    }
}

/// Transition functions for one problem instance.
#[derive(Debug, Clone)]
pub struct DomContext {
    d: u8,
    sigma: MuSet,
    rho: MuSet,
    direction: Direction,
    co: bool,
    with_witness: bool,
}

fn values_summing_to(target: u8, addend: u8, cap: u8) -> impl Iterator<Item = u8> {
    // All v in 0..=cap with min(cap, v + addend) == target.
    (0..=cap).filter(move |&v| (v + addend).min(cap) == target)
}

impl DomContext {
    pub fn new(spec: &SigmaRhoSpec, with_witness: bool) -> Result<Self, SolveError> {
        let d = spec.d().map_err(|e| SolveError::InvalidProblem(e.to_string()))?;
        if d > MAX_D as u32 {
            return Err(SolveError::InvalidProblem(format!(
                "truncation threshold d = {d} exceeds the supported maximum {MAX_D}"
            )));
        }
        Ok(DomContext {
            d: d as u8,
            sigma: spec.sigma.clone(),
            rho: spec.rho.clone(),
            direction: spec.direction,
            co: spec.is_co(),
            with_witness,
        })
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    /// The `(count, expected)` pair that drives connectivity for label `l`.
    fn conn(&self, idx: DomIndex, l: Label) -> (u8, u8) {
        if self.co {
            (idx.rb(l), idx.rbp(l))
        } else {
            (idx.r(l), idx.rp(l))
        }
    }

    fn is_active(&self, idx: DomIndex, l: Label) -> bool {
        let (a, b) = self.conn(idx, l);
        a != 0 && b != 0
    }

    /// `active(R, R')` (or `active(R̄, R̄')` in the co variant) restricted to `labels`.
    pub fn active(&self, idx: DomIndex, labels: GroundSet) -> GroundSet {
        let mut g = GroundSet::EMPTY;
        for l in labels.iter() {
            if self.is_active(idx, l) {
                g = g.with(l);
            }
        }
        g
    }

    fn cell(&self, ground: GroundSet) -> WeightedPartitionSet {
        WeightedPartitionSet::new(ground, self.direction)
    }

    fn witness(&self, v: &[u32]) -> Option<Witness> {
        self.with_witness.then(|| v.to_vec().into())
    }

    /// Table of a single vertex with label 1; a terminal must be in the solution.
    pub fn leaf(&self, vertex: u32, weight: u64, terminal: bool) -> DomTable {
        let mut t = DomTable {
            present: GroundSet::singleton(1),
            cells: Table::default(),
        };
        let one = GroundSet::singleton(1);
        let mut put = |idx: DomIndex, ground: GroundSet, w: u64, wit: Option<Witness>| {
            let mut c = self.cell(ground);
            c.insert(Partition::whole(ground), w, wit).expect("ground matches");
            t.cells.insert(idx, c);
        };
        let base = DomIndex::default();
        for rp in 0..=self.d {
            if !self.co {
                if !terminal && self.rho.contains(rp as u32) {
                    put(base.with_rp(1, rp), GroundSet::EMPTY, 0, self.witness(&[]));
                }
                if self.sigma.contains(rp as u32) {
                    let ground = if rp != 0 { one } else { GroundSet::EMPTY };
                    put(base.with_r(1, 1).with_rp(1, rp), ground, weight, self.witness(&[vertex]));
                }
            } else {
                // Vertex in the dominating complement.
                if self.sigma.contains(rp as u32) {
                    put(base.with_r(1, 1).with_rp(1, rp), GroundSet::EMPTY, 0, self.witness(&[]));
                }
                // Vertex in the connected set.
                if self.rho.contains(rp as u32) {
                    let idx = base.with_rp(1, rp).with_rb(1, 1);
                    put(idx, GroundSet::EMPTY, weight, self.witness(&[vertex]));
                    put(idx.with_rbp(1, 1), one, weight, self.witness(&[vertex]));
                }
            }
        }
        t
    }

    /// `add_{i,j}`: every target index has exactly one source, so no reduction is needed.
    pub fn add(&self, table: &DomTable, i: Label, j: Label) -> DomTable {
        if !table.present.contains(i) || !table.present.contains(j) {
            return table.clone();
        }
        let d = self.d;
        let mut out = DomTable {
            present: table.present,
            cells: Table::default(),
        };
        for (&src, cell) in &table.cells {
            let (ri, rj) = (src.r(i), src.r(j));
            let rpi: Vec<u8> = values_summing_to(src.rp(i), rj, d).collect();
            let rpj: Vec<u8> = values_summing_to(src.rp(j), ri, d).collect();
            let (rbpi, rbpj): (Vec<u8>, Vec<u8>) = if self.co {
                let opts = |own: u8, sp: u8, other: u8| -> Vec<u8> {
                    if own == 0 {
                        vec![0]
                    } else {
                        values_summing_to(sp, other, 1).collect()
                    }
                };
                (
                    opts(src.rb(i), src.rbp(i), src.rb(j)),
                    opts(src.rb(j), src.rbp(j), src.rb(i)),
                )
            } else {
                (vec![0], vec![0])
            };
            for &a in &rpi {
                for &b in &rpj {
                    for &x in &rbpi {
                        for &y in &rbpj {
                            let mut tgt = src.with_rp(i, a).with_rp(j, b);
                            if self.co {
                                tgt = tgt.with_rbp(i, x).with_rbp(j, y);
                            }
                            let set = self.add_cell(cell, tgt, table.present, i, j);
                            accumulate(&mut out.cells, tgt, set);
                        }
                    }
                }
            }
        }
        out
    }

    fn add_cell(
        &self,
        cell: &WeightedPartitionSet,
        tgt: DomIndex,
        present: GroundSet,
        i: Label,
        j: Label,
    ) -> WeightedPartitionSet {
        if self.active(tgt, present).is_empty() {
            return cell.collapse();
        }
        let (ci, cj) = (self.conn(tgt, i).0, self.conn(tgt, j).0);
        if ci == 0 || cj == 0 {
            return cell.clone();
        }
        let mut drop = GroundSet::EMPTY;
        for t in [i, j] {
            if self.conn(tgt, t).1 == 0 {
                drop = drop.with(t);
            }
        }
        crate::ops::proj(&crate::ops::merge_pair(cell, i, j, false), drop)
    }

    /// `ren_{i→j}` before reduction.
    pub fn ren_unreduced(&self, table: &DomTable, i: Label, j: Label) -> DomTable {
        if !table.present.contains(i) {
            return table.clone();
        }
        let present = table.present.without(i).with(j);
        let mut out = DomTable {
            present,
            cells: Table::default(),
        };
        let j_present = table.present.contains(j);
        for (&src, cell) in &table.cells {
            if j_present && src.rp(i) != src.rp(j) {
                continue;
            }
            if self.co && j_present && src.rb(i) == 1 && src.rb(j) == 1 && src.rbp(i) != src.rbp(j) {
                continue;
            }
            let tgt = src
                .cleared(i)
                .with_r(j, (src.r(i) + src.r(j)).min(self.d))
                .with_rp(j, src.rp(i).max(src.rp(j)))
                .with_rb(j, src.rb(i) | src.rb(j))
                .with_rbp(j, src.rbp(i) | src.rbp(j));
            let (cj, cpj) = self.conn(tgt, j);
            let set = if cj == 0 || cpj == 0 {
                cell.clone()
            } else {
                let mut joined = self.cell(cell.ground().without(i).with(j));
                for (p, e) in cell.iter() {
                    let mut q = p.clone();
                    for t in [i, j] {
                        if !q.ground().contains(t) {
                            q = q.extend(GroundSet::singleton(t)).expect("absent element");
                        }
                    }
                    let q = q.merge_elements(i, j).remove_unchecked(GroundSet::singleton(i));
                    joined.insert_unchecked(q, e.clone());
                }
                joined
            };
            accumulate(&mut out.cells, tgt, set);
        }
        out
    }

    /// Disjoint union before reduction.
    pub fn union_unreduced(&self, ta: &DomTable, tb: &DomTable) -> DomTable {
        let common = ta.present.intersection(tb.present);
        let mut out = DomTable {
            present: ta.present.union(tb.present),
            cells: Table::default(),
        };
        let rp_mask = nibble_mask(common);
        let mut groups: HashMap<u64, Vec<(DomIndex, &WeightedPartitionSet)>> = HashMap::new();
        for (&b, cell) in &tb.cells {
            groups.entry(b.rp & rp_mask).or_default().push((b, cell));
        }
        let a_labels = ta.present;
        let b_labels = tb.present;
        for (&a, ca) in &ta.cells {
            let Some(partners) = groups.get(&(a.rp & rp_mask)) else {
                continue;
            };
            let a_empty = if self.co { a.rb == 0 } else { a.r_is_zero() };
            let a_active = !self.active(a, a_labels).is_empty();
            for &(b, cb) in partners {
                if self.co {
                    let both = a.rb & b.rb;
                    if (a.rbp ^ b.rbp) & both != 0 {
                        continue;
                    }
                }
                let b_empty = if self.co { b.rb == 0 } else { b.r_is_zero() };
                // A side that already forms a finished component cannot meet the other side.
                if !(a_empty || b_empty || (a_active && !self.active(b, b_labels).is_empty())) {
                    continue;
                }
                let mut tgt = DomIndex {
                    r: a.r | b.r,
                    rp: a.rp | b.rp,
                    rb: a.rb | b.rb,
                    rbp: a.rbp | b.rbp,
                };
                for l in common.iter() {
                    tgt = tgt.with_r(l, (a.r(l) + b.r(l)).min(self.d));
                }
                let joined = join_sets(ca, cb).expect("same direction");
                accumulate(&mut out.cells, tgt, joined);
            }
        }
        out
    }

    /// Optimum over cells expecting nothing further.
    pub fn extract(&self, table: &DomTable) -> (Extended, Option<Witness>) {
        let mut best: Option<(u64, Option<Witness>)> = None;
        for (idx, cell) in &table.cells {
            if !idx.rp_is_zero() {
                continue;
            }
            if let Some(e) = cell.get(&Partition::empty()) {
                if best.as_ref().is_none_or(|(w, _)| self.direction.prefers(e.weight, *w)) {
                    best = Some((e.weight, e.witness.clone()));
                }
            }
        }
        match best {
            Some((w, wit)) => (Extended::Finite(w), wit),
            None => (self.direction.identity(), None),
        }
    }
}

fn nibble_mask(labels: GroundSet) -> u64 {
    labels.iter().fold(0u64, |m, l| m | (15 << (4 * l as u32)))
}

/// Per node and label: edges the class still receives from later operations (`u32::MAX` if empty).
fn future_degrees(expr: &CwExpression) -> Vec<Vec<u32>> {
    let final_graph = expr.evaluate().graph;
    let k = expr.k();
    let mut degree = vec![0u32; expr.num_vertices()];
    let mut stack: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut out = Vec::with_capacity(expr.nodes().len());
    let mut next = 0u32;
    for node in expr.nodes() {
        match node {
            Node::Introduce { .. } => {
                let mut classes = vec![Vec::new(); k + 1];
                classes[1].push(next);
                next += 1;
                stack.push(classes);
            }
            Node::Relabel { from, to } => {
                let top = stack.last_mut().expect("validated");
                let moved = std::mem::take(&mut top[*from as usize]);
                top[*to as usize].extend(moved);
            }
            Node::AddEdges { i, j } => {
                let top = stack.last().expect("validated");
                let (ci, cj) = (top[*i as usize].len() as u32, top[*j as usize].len() as u32);
                for &v in &top[*i as usize] {
                    degree[v as usize] += cj;
                }
                for &v in &top[*j as usize] {
                    degree[v as usize] += ci;
                }
            }
            Node::Union => {
                let b = stack.pop().expect("validated");
                let a = stack.last_mut().expect("validated");
                for (x, y) in a.iter_mut().zip(b) {
                    x.extend(y);
                }
            }
        }
        let top = stack.last().expect("non-empty");
        out.push(
            top.iter()
                .map(|c| {
                    c.first().map_or(u32::MAX, |&v| {
                        final_graph.degree(v) as u32 - degree[v as usize]
                    })
                })
                .collect(),
        );
    }
    out
}

impl DomContext {
    /// Drops co-variant cells whose connectivity expectation contradicts the known future degree.
    fn prune_lookahead(&self, table: &mut DomTable, future: &[u32]) {
        let d = self.d;
        table.cells.retain(|idx, _| {
            table.present.iter().all(|l| {
                let c = future[l as usize];
                if idx.rb(l) == 0 || idx.rp(l) >= d {
                    return true;
                }
                let expected = u8::from((idx.rp(l) as u32) < c);
                idx.rbp(l) == expected
            })
        });
    }
}

fn run(
    expr: &CwExpression,
    spec: &SigmaRhoSpec,
    opts: &SolveOptions,
    terminals: &[bool],
) -> Result<SolveResult, SolveError> {
    precheck(expr, "the domination solver", MAX_DOM_LABELS)?;
    let ctx = DomContext::new(spec, opts.with_witness)?;
    let k = expr.k();
    let bound = 1usize << (k - 1);
    let future = (ctx.co && opts.lookahead).then(|| future_degrees(expr));
    let mut tracker = Tracker::new();
    let mut stack: Vec<DomTable> = Vec::new();
    let mut vertex = 0u32;
    let reduce_table = |t: DomTable, tracker: &mut Tracker| DomTable {
        present: t.present,
        cells: normalize(t.cells, opts, tracker, reduce),
    };
    for (pos, node) in expr.nodes().iter().enumerate() {
        let mut table = match node {
            Node::Introduce { weight, .. } => {
                vertex += 1;
                let v = vertex - 1;
                ctx.leaf(v, weight.unwrap_or(1), terminals[v as usize])
            }
            Node::AddEdges { i, j } => ctx.add(&stack.pop().expect("validated"), *i, *j),
            Node::Relabel { from, to } => {
                let t = ctx.ren_unreduced(&stack.pop().expect("validated"), *from, *to);
                reduce_table(t, &mut tracker)
            }
            Node::Union => {
                let b = stack.pop().expect("validated");
                let a = stack.pop().expect("validated");
                let t = ctx.union_unreduced(&a, &b);
                reduce_table(t, &mut tracker)
            }
        };
        if let Some(f) = &future {
            ctx.prune_lookahead(&mut table, &f[pos]);
        }
        tracker.observe(&table.cells);
        if opts.use_reduce {
            debug_assert!(table.cells.values().all(|c| c.len() <= bound));
        }
        stack.push(table);
    }
    let root = stack.pop().expect("validated");
    let (optimum, witness) = ctx.extract(&root);
    Ok(SolveResult {
        direction: spec.direction,
        optimum,
        witness: witness.map(|w| w.to_vec()),
        stats: tracker.finish(),
    })
}

/// Optimum connected (σ,ρ)-dominating set.
pub fn solve_connected_sigma_rho(
    expr: &CwExpression,
    spec: &SigmaRhoSpec,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    let mut plain = spec.clone();
    plain.variant = Variant::Plain;
    run(expr, &plain, opts, &vec![false; expr.num_vertices()])
}

/// Optimum connected co-(σ,ρ)-dominating set.
pub fn solve_co_sigma_rho(
    expr: &CwExpression,
    spec: &SigmaRhoSpec,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    let mut co = spec.clone();
    co.variant = Variant::Co;
    run(expr, &co, opts, &vec![false; expr.num_vertices()])
}

/// Minimum node-weighted Steiner tree containing the named terminals.
pub fn solve_steiner(
    expr: &CwExpression,
    terminals: &[String],
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    expr.validate()?;
    if terminals.is_empty() {
        return Err(SolveError::NoTerminals);
    }
    let names = expr.vertex_names();
    let weights = expr.vertex_weights();
    let mut is_terminal = vec![false; names.len()];
    for t in terminals {
        let v = names
            .iter()
            .position(|n| *n == t.as_str())
            .ok_or_else(|| SolveError::UnknownTerminal(t.clone()))?;
        is_terminal[v] = true;
    }
    let spec = SigmaRhoSpec::steiner(terminals.to_vec());
    if is_terminal.iter().filter(|&&t| t).count() == 1 {
        precheck(expr, "the domination solver", MAX_DOM_LABELS)?;
        let v = is_terminal.iter().position(|&t| t).expect("one terminal");
        return Ok(SolveResult {
            direction: Direction::Min,
            optimum: Extended::Finite(weights[v]),
            witness: opts.with_witness.then(|| vec![v as u32]),
            stats: Default::default(),
        });
    }
    let mut plain = spec;
    plain.variant = Variant::Plain;
    run(expr, &plain, opts, &is_terminal)
}

/// Dispatches on the problem variant.
pub fn solve_sigma_rho(
    expr: &CwExpression,
    spec: &SigmaRhoSpec,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    match &spec.variant {
        Variant::Plain => solve_connected_sigma_rho(expr, spec, opts),
        Variant::Co => solve_co_sigma_rho(expr, spec, opts),
        Variant::Steiner(t) => solve_steiner(expr, t, opts),
    }
}
