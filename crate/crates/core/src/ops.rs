//! Operators on sets of weighted partitions and rank-based reduction.
//!
//! A [`WeightedPartitionSet`] is always kept normalized: at most one entry
//! per partition, holding the optimal weight for its [`Direction`]. Inserting
//! therefore performs `rmc` implicitly.
//!
//! [`reduce`] and [`ac_reduce`] prune a set to a representative subset by
//! picking an optimal-weight basis of the GF(2) cut matrix, whose rows are
//! indexed by partitions and whose columns are the cuts that separate the
//! ground set into a side containing its minimum element and the rest.

use crate::partition::{acyclic_extended, GroundSet, Partition, PartitionError};
use indexmap::IndexMap;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Sorted, duplicate-free vertex ids achieving an entry's weight.
pub type Witness = Arc<[u32]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpsError {
    #[error("optimization directions differ")]
    DirectionMismatch,
    #[error("ac_reduce is only defined for maximization")]
    AcReduceRequiresMax,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    /// True if `a` is strictly preferred over `b`.
    pub fn prefers(self, a: u64, b: u64) -> bool {
        match self {
            Direction::Max => a > b,
            Direction::Min => a < b,
        }
    }

    /// The optimum over an empty set.
    pub fn identity(self) -> Extended {
        match self {
            Direction::Max => Extended::NegInf,
            Direction::Min => Extended::PosInf,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Max => "max",
            Direction::Min => "min",
        })
    }
}

/// Non-negative integers extended with both infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended {
    NegInf,
    Finite(u64),
    PosInf,
}

impl Extended {
    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(w) => write!(f, "{w}"),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub weight: u64,
    pub witness: Option<Witness>,
}

/// A single weighted partition, used as input to [`rmc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPartition {
    pub partition: Partition,
    pub weight: u64,
    pub witness: Option<Witness>,
}

impl WeightedPartition {
    pub fn new(partition: Partition, weight: u64) -> Self {
        WeightedPartition {
            partition,
            weight,
            witness: None,
        }
    }
}

fn witness_cmp(a: &Option<Witness>, b: &Option<Witness>) -> Ordering {
    match (a, b) {
        (Some(a), Some(b)) => a.cmp(b),
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
    }
}

/// Union of two sorted witnesses.
pub fn merge_witness(a: &Witness, b: &Witness) -> Witness {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.into()
}

fn merge_opt_witness(a: &Option<Witness>, b: &Option<Witness>) -> Option<Witness> {
    match (a, b) {
        (Some(a), Some(b)) => Some(merge_witness(a, b)),
        _ => None,
    }
}

/// A table cell: weighted partitions over a common ground set, one per partition.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedPartitionSet {
    ground: GroundSet,
    direction: Direction,
    entries: IndexMap<Partition, Entry>,
}

impl fmt::Debug for WeightedPartitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.direction)?;
        for (n, (p, e)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({p}, {})", e.weight)?;
        }
        f.write_str("}")
    }
}

impl WeightedPartitionSet {
    pub fn new(ground: GroundSet, direction: Direction) -> Self {
        WeightedPartitionSet {
            ground,
            direction,
            entries: IndexMap::new(),
        }
    }

    /// `{(p, w)}` for a single partition.
    pub fn singleton(partition: Partition, weight: u64, direction: Direction) -> Self {
        let mut s = Self::new(partition.ground(), direction);
        s.entries.insert(
            partition,
            Entry {
                weight,
                witness: None,
            },
        );
        s
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &Partition) -> Option<&Entry> {
        self.entries.get(p)
    }

    /// Entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Entry)> {
        self.entries.iter()
    }

    pub fn to_vec(&self) -> Vec<WeightedPartition> {
        self.entries
            .iter()
            .map(|(p, e)| WeightedPartition {
                partition: p.clone(),
                weight: e.weight,
                witness: e.witness.clone(),
            })
            .collect()
    }

    /// Inserts an entry, keeping the better one if the partition is already present.
    pub fn insert(
        &mut self,
        partition: Partition,
        weight: u64,
        witness: Option<Witness>,
    ) -> Result<(), OpsError> {
        if partition.ground() != self.ground {
            return Err(PartitionError::GroundMismatch.into());
        }
        self.insert_unchecked(partition, Entry { weight, witness });
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, partition: Partition, entry: Entry) {
        debug_assert_eq!(partition.ground(), self.ground);
        match self.entries.get_mut(&partition) {
            None => {
                self.entries.insert(partition, entry);
            }
            Some(old) => {
                let better = self.direction.prefers(entry.weight, old.weight)
                    || (entry.weight == old.weight
                        && witness_cmp(&entry.witness, &old.witness) == Ordering::Less);
                if better {
                    *old = entry;
                }
            }
        }
    }

    /// Merges `other` into `self` (set union followed by `rmc`).
    pub fn absorb(&mut self, other: &WeightedPartitionSet) {
        debug_assert_eq!(self.ground, other.ground);
        for (p, e) in &other.entries {
            self.insert_unchecked(p.clone(), e.clone());
        }
    }

    /// The optimal entry, ties broken by insertion order.
    pub fn best(&self) -> Option<(&Partition, &Entry)> {
        let mut best: Option<(&Partition, &Entry)> = None;
        for (p, e) in &self.entries {
            match best {
                Some((_, b)) if !self.direction.prefers(e.weight, b.weight) => {}
                _ => best = Some((p, e)),
            }
        }
        best
    }

    /// Replaces every partition by the empty partition of the empty ground set.
    pub fn collapse(&self) -> WeightedPartitionSet {
        let mut out = WeightedPartitionSet::new(GroundSet::EMPTY, self.direction);
        for e in self.entries.values() {
            out.insert_unchecked(Partition::empty(), e.clone());
        }
        out
    }

    /// Adds a fixed weight (and witness) to every entry.
    pub fn shifted(&self, weight: u64, witness: Option<&Witness>) -> WeightedPartitionSet {
        let mut out = self.clone();
        for e in out.entries.values_mut() {
            e.weight += weight;
            if let (Some(w), Some(extra)) = (&e.witness, witness) {
                e.witness = Some(merge_witness(w, extra));
            }
        }
        out
    }

    fn retain_indices(&self, keep: &[usize]) -> WeightedPartitionSet {
        let mut out = WeightedPartitionSet::new(self.ground, self.direction);
        for &i in keep {
            let (p, e) = self.entries.get_index(i).expect("index in range");
            out.entries.insert(p.clone(), e.clone());
        }
        out
    }
}

/// Normalizes a multiset of weighted partitions: one entry per partition.
pub fn rmc(
    ground: GroundSet,
    direction: Direction,
    entries: impl IntoIterator<Item = WeightedPartition>,
) -> Result<WeightedPartitionSet, OpsError> {
    let mut out = WeightedPartitionSet::new(ground, direction);
    for wp in entries {
        out.insert(wp.partition, wp.weight, wp.witness)?;
    }
    Ok(out)
}

/// Drops entries with a block inside `x`, then removes `x` from the rest.
///
/// Elements of `x` outside the ground set are ignored.
pub fn proj(a: &WeightedPartitionSet, x: GroundSet) -> WeightedPartitionSet {
    let x = x.intersection(a.ground);
    if x.is_empty() {
        return a.clone();
    }
    let mut out = WeightedPartitionSet::new(a.ground.difference(x), a.direction);
    for (p, e) in &a.entries {
        if !p.has_block_within(x) {
            out.insert_unchecked(p.remove_unchecked(x), e.clone());
        }
    }
    out
}

fn join_impl(
    a: &WeightedPartitionSet,
    b: &WeightedPartitionSet,
    acyclic_only: bool,
) -> Result<WeightedPartitionSet, OpsError> {
    if a.direction != b.direction {
        return Err(OpsError::DirectionMismatch);
    }
    let mut out = WeightedPartitionSet::new(a.ground.union(b.ground), a.direction);
    for (p, ep) in &a.entries {
        for (q, eq) in &b.entries {
            let joined = p.join_extended(q);
            if acyclic_only && !acyclic_extended(p, q, &joined) {
                continue;
            }
            out.insert_unchecked(
                joined,
                Entry {
                    weight: ep.weight + eq.weight,
                    witness: merge_opt_witness(&ep.witness, &eq.witness),
                },
            );
        }
    }
    Ok(out)
}

/// `{(p↑ ⊔ q↑, w₁ + w₂)}` over the union of the ground sets.
pub fn join_sets(
    a: &WeightedPartitionSet,
    b: &WeightedPartitionSet,
) -> Result<WeightedPartitionSet, OpsError> {
    join_impl(a, b, false)
}

/// [`join_sets`] restricted to pairs whose extensions are acyclic.
pub fn acjoin(
    a: &WeightedPartitionSet,
    b: &WeightedPartitionSet,
) -> Result<WeightedPartitionSet, OpsError> {
    join_impl(a, b, true)
}

/// Set union of two cells over the same ground set.
pub fn union_sets(
    a: &WeightedPartitionSet,
    b: &WeightedPartitionSet,
) -> Result<WeightedPartitionSet, OpsError> {
    if a.direction != b.direction {
        return Err(OpsError::DirectionMismatch);
    }
    if a.ground != b.ground {
        return Err(PartitionError::GroundMismatch.into());
    }
    let mut out = a.clone();
    out.absorb(b);
    Ok(out)
}

/// Merges the blocks containing `i` and `j` in every entry; `i`, `j` must be in the ground set.
///
/// Equivalent to `join_sets(a, {({{i,j}}, 0)})` without the intermediate set.
pub(crate) fn merge_pair(a: &WeightedPartitionSet, i: u8, j: u8, acyclic_only: bool) -> WeightedPartitionSet {
    let mut out = WeightedPartitionSet::new(a.ground, a.direction);
    for (p, e) in &a.entries {
        if acyclic_only && p.same_block(i, j) {
            continue;
        }
        out.insert_unchecked(p.merge_elements(i, j), e.clone());
    }
    out
}

/// One row of the cut matrix: bit `c` is set iff cut `c` keeps every block on one side.
///
/// Columns are subsets of the ground set minus its minimum element, encoded
/// as bitmasks over those elements in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutMatrixRow {
    words: Vec<u64>,
    len: usize,
}

impl CutMatrixRow {
    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        assert!(words.len() * 64 >= len);
        CutMatrixRow { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, column: usize) -> bool {
        self.words[column / 64] >> (column % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn lowest_set_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn xor_assign(&mut self, other: &CutMatrixRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Positions of `mask`'s elements within `rest`, packed into the low bits.
fn compress(mask: u64, rest: u64) -> u64 {
    let mut out = 0u64;
    let mut bit = 0;
    let mut r = rest;
    while r != 0 {
        let low = r & r.wrapping_neg();
        if mask & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        r ^= low;
    }
    out
}

/// The cut-matrix row of `p` (over `p`'s own ground set).
pub fn cut_row(p: &Partition) -> CutMatrixRow {
    let ground = p.ground().bits();
    if ground == 0 {
        return CutMatrixRow::from_words(vec![1], 1);
    }
    let pivot = ground & ground.wrapping_neg();
    let rest = ground ^ pivot;
    let columns = 1usize << rest.count_ones();
    let mut words = vec![0u64; columns.div_ceil(64)];
    let free: Vec<u64> = p
        .block_masks()
        .iter()
        .filter(|&&b| b & pivot == 0)
        .map(|&b| compress(b, rest))
        .collect();
    for subset in 0u64..(1u64 << free.len()) {
        let mut column = 0u64;
        let mut s = subset;
        while s != 0 {
            column |= free[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        words[(column / 64) as usize] |= 1 << (column % 64);
    }
    CutMatrixRow::from_words(words, columns)
}

/// Indices (ascending) of an optimal-weight basis of the rows' span.
///
/// Rows are visited best-first (stable on ties) and kept when independent of
/// those already kept; by the matroid exchange property this is optimal.
pub fn max_weight_basis(rows: &[CutMatrixRow], weights: &[u64], direction: Direction) -> Vec<usize> {
    assert_eq!(rows.len(), weights.len());
    let mut order: Vec<usize> = (0..rows.len()).collect();
    match direction {
        Direction::Max => order.sort_by(|&a, &b| weights[b].cmp(&weights[a])),
        Direction::Min => order.sort_by(|&a, &b| weights[a].cmp(&weights[b])),
    }
    let width = rows.first().map_or(0, |r| r.len);
    // basis[c] holds the reduced row whose lowest set bit is c.
    let mut basis: Vec<Option<CutMatrixRow>> = vec![None; width];
    let mut rank = 0;
    let mut chosen = Vec::new();
    for i in order {
        if rank == width {
            break;
        }
        let mut r = rows[i].clone();
        while let Some(c) = r.lowest_set_bit() {
            match &basis[c] {
                Some(b) => r.xor_assign(b),
                None => {
                    basis[c] = Some(r);
                    rank += 1;
                    chosen.push(i);
                    break;
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

fn basis_of(a: &WeightedPartitionSet, indices: &[usize]) -> Vec<usize> {
    let rows: Vec<CutMatrixRow> = indices
        .iter()
        .map(|&i| cut_row(a.entries.get_index(i).expect("index").0))
        .collect();
    let weights: Vec<u64> = indices
        .iter()
        .map(|&i| a.entries.get_index(i).expect("index").1.weight)
        .collect();
    max_weight_basis(&rows, &weights, a.direction)
        .into_iter()
        .map(|t| indices[t])
        .collect()
}

fn best_only(a: &WeightedPartitionSet) -> WeightedPartitionSet {
    let mut out = WeightedPartitionSet::new(a.ground, a.direction);
    if let Some((p, e)) = a.best() {
        out.entries.insert(p.clone(), e.clone());
    }
    out
}

/// A representative subset of at most `2^{|V|−1}` entries.
pub fn reduce(a: &WeightedPartitionSet) -> WeightedPartitionSet {
    if a.ground.is_empty() {
        return best_only(a);
    }
    let bound = 1usize << (a.ground.len() - 1);
    if a.len() <= 1 {
        return a.clone();
    }
    let all: Vec<usize> = (0..a.len()).collect();
    let keep = basis_of(a, &all);
    debug_assert!(keep.len() <= bound);
    a.retain_indices(&keep)
}

/// An ac-representative subset of at most `|V|·2^{|V|−1}` entries (maximization only).
///
/// Entries are grouped by `|V| − #blocks`, and an optimal basis is taken per group.
pub fn ac_reduce(a: &WeightedPartitionSet) -> Result<WeightedPartitionSet, OpsError> {
    if a.direction != Direction::Max {
        return Err(OpsError::AcReduceRequiresMax);
    }
    if a.ground.is_empty() {
        return Ok(best_only(a));
    }
    if a.len() <= 1 {
        return Ok(a.clone());
    }
    let n = a.ground.len();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in a.entries.keys().enumerate() {
        groups[n - p.num_blocks()].push(i);
    }
    let mut keep: Vec<usize> = groups
        .iter()
        .filter(|g| !g.is_empty())
        .flat_map(|g| if g.len() == 1 { g.clone() } else { basis_of(a, g) })
        .collect();
    keep.sort_unstable();
    debug_assert!(keep.len() <= n << (n - 1));
    Ok(a.retain_indices(&keep))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    Plain,
    Acyclic,
}

/// Optimum weight over entries `p` with `p ⊔ q = {V}` (and `acyclic(p, q)` in acyclic mode).
pub fn query_opt(
    a: &WeightedPartitionSet,
    q: &Partition,
    mode: QueryMode,
) -> Result<Extended, OpsError> {
    if q.ground() != a.ground {
        return Err(PartitionError::GroundMismatch.into());
    }
    let mut best: Option<u64> = None;
    for (p, e) in &a.entries {
        let joined = p.join_extended(q);
        if !joined.is_whole() {
            continue;
        }
        if mode == QueryMode::Acyclic && !acyclic_extended(p, q, &joined) {
            continue;
        }
        if best.is_none_or(|b| a.direction.prefers(e.weight, b)) {
            best = Some(e.weight);
        }
    }
    Ok(best.map_or(a.direction.identity(), Extended::Finite))
}
