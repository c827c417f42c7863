//! Canonical set partitions over small ordered ground sets.
//!
//! Ground sets are subsets of `0..64` stored as bitmasks. Element `0` plays
//! the role of the distinguished vertex `v0` in the feedback vertex set
//! tables, so whenever it is present it is the minimum element.
//!
//! A [`Partition`] keeps its blocks as bitmasks sorted by their minimum
//! element. Two values are equal exactly when they describe the same
//! partition, which is what the table cells rely on for deduplication.

use smallvec::SmallVec;
use std::fmt;
use thiserror::Error;

/// Largest supported ground-set size.
pub const MAX_GROUND: usize = 64;

/// Largest ground set [`enumerate_partitions`] accepts.
pub const MAX_ENUMERATION: usize = 8;

pub type Element = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("element {0} is outside the supported range 0..64")]
    ElementOutOfRange(u64),
    #[error("element {0} appears in more than one block")]
    OverlappingBlocks(Element),
    #[error("element {0} is not in the ground set")]
    OutsideGround(Element),
    #[error("element {0} of the ground set is not covered by any block")]
    Uncovered(Element),
    #[error("blocks must be non-empty")]
    EmptyBlock,
    #[error("partitions are over different ground sets")]
    GroundMismatch,
    #[error("{0} is not a subset of the ground set")]
    NotSubset(GroundSet),
    #[error("{0} intersects the ground set")]
    Intersects(GroundSet),
    #[error("ground set of size {size} is too large to enumerate (limit {limit})")]
    TooLarge { size: usize, limit: usize },
}

/// A finite set of elements drawn from `0..64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroundSet(u64);

impl GroundSet {
    pub const EMPTY: GroundSet = GroundSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        GroundSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn from_elements<I>(elements: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut bits = 0u64;
        for e in elements {
            let e = e.into();
            if e >= MAX_GROUND as u64 {
                return Err(PartitionError::ElementOutOfRange(e));
            }
            bits |= 1 << e;
        }
        Ok(GroundSet(bits))
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            GroundSet(u64::MAX)
        } else {
            GroundSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(e: Element) -> Self {
        GroundSet(1 << e)
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, e: Element) -> bool {
        e < 64 && self.0 & (1 << e) != 0
    }

    pub fn min(self) -> Option<Element> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Element)
    }

    pub const fn union(self, other: Self) -> Self {
        GroundSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        GroundSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        GroundSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(self, e: Element) -> Self {
        GroundSet(self.0 | (1 << e))
    }

    pub fn without(self, e: Element) -> Self {
        GroundSet(self.0 & !(1 << e))
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Element> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros();
                bits &= bits - 1;
                Some(e as Element)
            }
        })
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, e) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

type Blocks = SmallVec<[u64; 6]>;

/// A partition of a [`GroundSet`] in canonical form.
///
/// Every element is mapped to its block's minimum element; internally the
/// blocks are kept as bitmasks ordered by that minimum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    ground: GroundSet,
    blocks: Blocks,
}

fn sort_blocks(blocks: &mut Blocks) {
    blocks.sort_unstable_by_key(|b| b.trailing_zeros());
}

/// Merges overlapping masks until the result is pairwise disjoint.
fn merge_into(out: &mut Blocks, block: u64) {
    let mut merged = block;
    out.retain(|b| {
        if *b & merged != 0 {
            merged |= *b;
            false
        } else {
            true
        }
    });
    out.push(merged);
}

impl Partition {
    /// The unique partition of the empty set.
    pub fn empty() -> Self {
        Partition {
            ground: GroundSet::EMPTY,
            blocks: Blocks::new(),
        }
    }

    /// Builds the canonical partition from explicit blocks.
    pub fn canonicalize<B, I>(blocks: B, ground: GroundSet) -> Result<Self, PartitionError>
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut seen = 0u64;
        let mut out = Blocks::new();
        for block in blocks {
            let mask = GroundSet::from_elements(block)?.bits();
            if mask == 0 {
                return Err(PartitionError::EmptyBlock);
            }
            if mask & !ground.bits() != 0 {
                let e = (mask & !ground.bits()).trailing_zeros() as Element;
                return Err(PartitionError::OutsideGround(e));
            }
            if mask & seen != 0 {
                return Err(PartitionError::OverlappingBlocks(
                    (mask & seen).trailing_zeros() as Element,
                ));
            }
            seen |= mask;
            out.push(mask);
        }
        if seen != ground.bits() {
            let e = (ground.bits() & !seen).trailing_zeros() as Element;
            return Err(PartitionError::Uncovered(e));
        }
        sort_blocks(&mut out);
        Ok(Partition { ground, blocks: out })
    }

    /// Trusted constructor: masks must be disjoint, non-empty and cover `ground`.
    pub(crate) fn from_masks(ground: GroundSet, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut blocks: Blocks = masks.into_iter().collect();
        sort_blocks(&mut blocks);
        debug_assert_eq!(blocks.iter().fold(0, |a, b| a | b), ground.bits());
        Partition { ground, blocks }
    }

    /// Every element in its own block (the lattice bottom).
    pub fn singletons(ground: GroundSet) -> Self {
        Partition {
            ground,
            blocks: ground.iter().map(|e| 1u64 << e).collect(),
        }
    }

    /// The single-block partition `{V}` (the lattice top); empty for `V = ∅`.
    pub fn whole(ground: GroundSet) -> Self {
        let mut blocks = Blocks::new();
        if !ground.is_empty() {
            blocks.push(ground.bits());
        }
        Partition { ground, blocks }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> impl Iterator<Item = GroundSet> + '_ {
        self.blocks.iter().map(|&b| GroundSet(b))
    }

    pub(crate) fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    /// True for `{V}`; the empty partition counts as the top of `Π(∅)`.
    pub fn is_whole(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn block_of(&self, e: Element) -> Option<GroundSet> {
        if !self.ground.contains(e) {
            return None;
        }
        self.blocks
            .iter()
            .find(|&&b| b & (1 << e) != 0)
            .map(|&b| GroundSet(b))
    }

    /// Minimum element of the block containing `e`.
    pub fn representative(&self, e: Element) -> Option<Element> {
        self.block_of(e).and_then(GroundSet::min)
    }

    /// `(element, representative)` pairs in element order.
    pub fn assignment(&self) -> Vec<(Element, Element)> {
        self.ground
            .iter()
            .map(|e| (e, self.representative(e).expect("element in ground")))
            .collect()
    }

    pub fn same_block(&self, a: Element, b: Element) -> bool {
        self.blocks
            .iter()
            .any(|&m| m & (1 << a) != 0 && m & (1 << b) != 0)
    }

    /// Lattice join over a common ground set.
    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        if self.ground != other.ground {
            return Err(PartitionError::GroundMismatch);
        }
        Ok(self.join_extended(other))
    }

    /// `p↑(V ∪ V') ⊔ q↑(V ∪ V')` for partitions over possibly different grounds.
    pub fn join_extended(&self, other: &Partition) -> Partition {
        let ground = self.ground.union(other.ground);
        let mut out = Blocks::new();
        out.extend(self.blocks.iter().copied());
        for e in other.ground.difference(self.ground).iter() {
            out.push(1 << e);
        }
        for &b in &other.blocks {
            merge_into(&mut out, b);
        }
        sort_blocks(&mut out);
        Partition { ground, blocks: out }
    }

    /// Removes the elements of `x`, dropping blocks that become empty.
    pub fn restrict(&self, x: GroundSet) -> Result<Partition, PartitionError> {
        if !x.is_subset(self.ground) {
            return Err(PartitionError::NotSubset(x));
        }
        Ok(self.remove_unchecked(x))
    }

    pub(crate) fn remove_unchecked(&self, x: GroundSet) -> Partition {
        let keep = !x.bits();
        let blocks: Blocks = self
            .blocks
            .iter()
            .map(|b| b & keep)
            .filter(|&b| b != 0)
            .collect();
        // Removing elements never changes the order of block minima among
        // survivors except when a minimum is removed, so re-sort.
        let mut p = Partition {
            ground: self.ground.difference(x),
            blocks,
        };
        sort_blocks(&mut p.blocks);
        p
    }

    /// True if some block lies entirely inside `x`.
    pub fn has_block_within(&self, x: GroundSet) -> bool {
        self.blocks.iter().any(|&b| b & !x.bits() == 0)
    }

    /// Adds every element of `y` as a singleton block.
    pub fn extend(&self, y: GroundSet) -> Result<Partition, PartitionError> {
        if !y.is_disjoint(self.ground) {
            return Err(PartitionError::Intersects(y));
        }
        let mut blocks = self.blocks.clone();
        blocks.extend(y.iter().map(|e| 1u64 << e));
        sort_blocks(&mut blocks);
        Ok(Partition {
            ground: self.ground.union(y),
            blocks,
        })
    }

    /// Merges the blocks containing `a` and `b`, both of which must be in the ground set.
    pub(crate) fn merge_elements(&self, a: Element, b: Element) -> Partition {
        let mut out = self.blocks.clone();
        merge_into(&mut out, (1u64 << a) | (1u64 << b));
        sort_blocks(&mut out);
        Partition {
            ground: self.ground,
            blocks: out,
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, b) in self.blocks().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

/// `|V| + #(p ⊔ q) − (#p + #q) = 0`.
pub fn acyclic(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    if p.ground != q.ground {
        return Err(PartitionError::GroundMismatch);
    }
    Ok(acyclic_extended(p, q, &p.join_extended(q)))
}

/// `acyclic(p↑, q↑)` over the union ground, given the already computed join.
pub(crate) fn acyclic_extended(p: &Partition, q: &Partition, joined: &Partition) -> bool {
    let v = joined.ground.len();
    let p_up = p.num_blocks() + joined.ground.difference(p.ground).len();
    let q_up = q.num_blocks() + joined.ground.difference(q.ground).len();
    v + joined.num_blocks() == p_up + q_up
}

/// All partitions of `ground`, each exactly once, in restricted-growth order.
pub fn enumerate_partitions(ground: GroundSet) -> Result<Vec<Partition>, PartitionError> {
    let n = ground.len();
    if n > MAX_ENUMERATION {
        return Err(PartitionError::TooLarge {
            size: n,
            limit: MAX_ENUMERATION,
        });
    }
    let elements: Vec<Element> = ground.iter().collect();
    let mut out = Vec::new();
    // Restricted growth string: code[0] = 0, code[t] <= 1 + max(code[..t]).
    let mut code = vec![0usize; n];
    loop {
        let blocks = code.iter().copied().max().map_or(0, |m| m + 1);
        let mut masks = vec![0u64; blocks];
        for (t, &c) in code.iter().enumerate() {
            masks[c] |= 1 << elements[t];
        }
        out.push(Partition::from_masks(ground, masks));

        // Advance to the next restricted growth string.
        let mut t = n;
        loop {
            if t <= 1 {
                return Ok(out);
            }
            t -= 1;
            let prefix_max = code[..t].iter().copied().max().unwrap_or(0);
            if code[t] <= prefix_max {
                code[t] += 1;
                for c in &mut code[t + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}
