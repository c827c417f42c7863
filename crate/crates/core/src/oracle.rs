//! Brute-force reference solvers and an exhaustive representativity check.
//!
//! Everything here uses plain vectors, bitmask subset enumeration and a tiny
//! union-find of its own; nothing is shared with the dynamic programs.

use crate::graph::Graph;
use crate::ops::{Direction, Extended, QueryMode, WeightedPartitionSet};
use crate::partition::Partition;
use crate::sigma_rho::{MuSet, SigmaRhoSpec, Variant};
use thiserror::Error;

/// Largest instance the subset enumeration accepts.
pub const MAX_ORACLE_VERTICES: usize = 20;
/// Largest ground set for exhaustive partition queries.
pub const MAX_QUERY_GROUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("at least one terminal is required")]
    NoTerminals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: Extended,
    /// Lexicographically smallest optimal vertex set (sorted ids), if feasible.
    pub witness: Option<Vec<u32>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    /// False if `a` and `b` were already connected.
    fn unite(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

fn check_size(g: &Graph) -> Result<(), OracleError> {
    if g.n() > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge {
            size: g.n(),
            limit: MAX_ORACLE_VERTICES,
        });
    }
    Ok(())
}

fn members(mask: u32, n: usize) -> Vec<u32> {
    (0..n as u32).filter(|v| mask >> v & 1 == 1).collect()
}

fn weight_of(g: &Graph, mask: u32) -> u64 {
    members(mask, g.n()).iter().map(|&v| g.weight(v)).sum()
}

fn adjacency(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for (a, b) in g.edges() {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    adj
}

/// Keeps the better of two candidates; ties go to the lexicographically smaller vertex list.
fn better(dir: Direction, best: &mut Option<(u64, Vec<u32>)>, w: u64, set: Vec<u32>) {
    let replace = match best {
        None => true,
        Some((bw, bs)) => dir.prefers(w, *bw) || (w == *bw && set < *bs),
    };
    if replace {
        *best = Some((w, set));
    }
}

fn finish(dir: Direction, best: Option<(u64, Vec<u32>)>) -> OracleResult {
    match best {
        Some((w, s)) => OracleResult {
            optimum: Extended::Finite(w),
            witness: Some(s),
        },
        None => OracleResult {
            optimum: dir.identity(),
            witness: None,
        },
    }
}

/// Union-find cycle detection on the subgraph induced by `keep`.
fn induces_forest(g: &Graph, keep: u32) -> bool {
    let mut dsu = Dsu::new(g.n());
    g.edges()
        .filter(|&(a, b)| keep >> a & 1 == 1 && keep >> b & 1 == 1)
        .all(|(a, b)| dsu.unite(a as usize, b as usize))
}

/// Number of connected components of `G[mask]` by depth-first search.
fn components(adj: &[u32], mask: u32) -> usize {
    let mut seen = 0u32;
    let mut count = 0;
    for v in 0..adj.len() {
        if mask >> v & 1 == 0 || seen >> v & 1 == 1 {
            continue;
        }
        count += 1;
        let mut stack = vec![v];
        seen |= 1 << v;
        while let Some(u) = stack.pop() {
            let mut next = adj[u] & mask & !seen;
            seen |= next;
            while next != 0 {
                stack.push(next.trailing_zeros() as usize);
                next &= next - 1;
            }
        }
    }
    count
}

/// Minimum-weight feedback vertex set, by enumerating deletion sets.
pub fn brute_min_fvs(g: &Graph) -> Result<OracleResult, OracleError> {
    check_size(g)?;
    let n = g.n();
    let full = ((1u64 << n) - 1) as u32;
    let mut best = None;
    for del in 0..=full {
        if induces_forest(g, full & !del) {
            better(Direction::Min, &mut best, weight_of(g, del), members(del, n));
        }
    }
    Ok(finish(Direction::Min, best))
}

/// Maximum-weight induced forest, checking `|E(G[F])| = |F| − #components` directly.
pub fn brute_max_forest(g: &Graph) -> Result<OracleResult, OracleError> {
    check_size(g)?;
    let n = g.n();
    let adj = adjacency(g);
    let mut best = None;
    for keep in 0..=((1u64 << n) - 1) as u32 {
        let edges: u32 = (0..n).filter(|&v| keep >> v & 1 == 1).map(|v| (adj[v] & keep).count_ones()).sum::<u32>() / 2;
        if edges as usize + components(&adj, keep) == keep.count_ones() as usize {
            better(Direction::Max, &mut best, weight_of(g, keep), members(keep, n));
        }
    }
    Ok(finish(Direction::Max, best))
}

fn dominates(adj: &[u32], d: u32, sigma: &MuSet, rho: &MuSet) -> bool {
    (0..adj.len()).all(|u| {
        let c = (adj[u] & d).count_ones();
        if d >> u & 1 == 1 {
            sigma.contains(c)
        } else {
            rho.contains(c)
        }
    })
}

/// Optimum connected (co-)(σ,ρ)-dominating set or Steiner tree; the empty set counts as connected.
pub fn brute_sigma_rho(g: &Graph, spec: &SigmaRhoSpec) -> Result<OracleResult, OracleError> {
    check_size(g)?;
    let n = g.n();
    let adj = adjacency(g);
    let full = ((1u64 << n) - 1) as u32;
    let mut required = 0u32;
    if let Variant::Steiner(terms) = &spec.variant {
        if terms.is_empty() {
            return Err(OracleError::NoTerminals);
        }
        for t in terms {
            let v = g.id(t).ok_or_else(|| OracleError::UnknownTerminal(t.clone()))?;
            required |= 1 << v;
        }
    }
    let mut best = None;
    for x in 0..=full {
        if x & required != required || components(&adj, x) > 1 {
            continue;
        }
        let feasible = match spec.variant {
            // A Steiner tree only has to connect the terminals.
            Variant::Steiner(_) => true,
            Variant::Co => dominates(&adj, full & !x, &spec.sigma, &spec.rho),
            Variant::Plain => dominates(&adj, x, &spec.sigma, &spec.rho),
        };
        if feasible {
            better(spec.direction, &mut best, weight_of(g, x), members(x, n));
        }
    }
    Ok(finish(spec.direction, best))
}

/// Partitions as block lists over explicit element vectors.
type Blocks = Vec<Vec<u8>>;

fn to_blocks(p: &Partition) -> Blocks {
    p.blocks().map(|b| b.iter().collect()).collect()
}

/// All set partitions of `elems` via restricted growth strings.
fn all_partitions(elems: &[u8]) -> Vec<Blocks> {
    fn rec(elems: &[u8], i: usize, cur: &mut Blocks, out: &mut Vec<Blocks>) {
        if i == elems.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(elems[i]);
            rec(elems, i + 1, cur, out);
            cur[b].pop();
        }
        cur.push(vec![elems[i]]);
        rec(elems, i + 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(elems, 0, &mut Vec::new(), &mut out);
    out
}

/// `(connected, acyclic)` for the union of the two block structures over `elems`.
fn join_props(elems: &[u8], p: &Blocks, q: &Blocks) -> (bool, bool) {
    let pos = |e: u8| elems.iter().position(|&x| x == e).expect("element of ground");
    let mut dsu = Dsu::new(elems.len());
    let mut acyclic = true;
    // A block of size s contributes a spanning tree of s − 1 edges.
    for b in p.iter().chain(q) {
        for w in b.windows(2) {
            if !dsu.unite(pos(w[0]), pos(w[1])) {
                acyclic = false;
            }
        }
    }
    let roots: std::collections::BTreeSet<usize> = (0..elems.len()).map(|i| dsu.find(i)).collect();
    (roots.len() <= 1, acyclic)
}

fn naive_query(a: &[(Blocks, u64)], elems: &[u8], q: &Blocks, dir: Direction, mode: QueryMode) -> Extended {
    let mut best: Option<u64> = None;
    for (p, w) in a {
        let (connected, acyclic) = join_props(elems, p, q);
        if connected && (mode == QueryMode::Plain || acyclic) && best.is_none_or(|b| dir.prefers(*w, b)) {
            best = Some(*w);
        }
    }
    best.map_or(dir.identity(), Extended::Finite)
}

/// True iff both sets answer every partition query of the ground set identically.
pub fn check_representative(
    a: &WeightedPartitionSet,
    b: &WeightedPartitionSet,
    mode: QueryMode,
) -> Result<bool, OracleError> {
    if a.ground() != b.ground() || a.direction() != b.direction() {
        return Err(OracleError::GroundMismatch);
    }
    let elems: Vec<u8> = a.ground().iter().collect();
    if elems.len() > MAX_QUERY_GROUND {
        return Err(OracleError::TooLarge {
            size: elems.len(),
            limit: MAX_QUERY_GROUND,
        });
    }
    let list = |s: &WeightedPartitionSet| -> Vec<(Blocks, u64)> {
        s.iter().map(|(p, e)| (to_blocks(p), e.weight)).collect()
    };
    let (la, lb) = (list(a), list(b));
    let dir = a.direction();
    Ok(all_partitions(&elems)
        .iter()
        .all(|q| naive_query(&la, &elems, q, dir, mode) == naive_query(&lb, &elems, q, dir, mode)))
}

/// Number of partitions the oracle enumerates for a ground of `n` elements.
pub fn partition_count(n: usize) -> usize {
    let elems: Vec<u8> = (0..n as u8).collect();
    all_partitions(&elems).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::GroundSet;

    fn graph(text: &str) -> Graph {
        Graph::parse(text).unwrap()
    }

    fn triangle() -> Graph {
        graph("v a\nv b\nv c\ne a b\ne b c\ne a c")
    }

    #[test]
    fn fvs_examples() {
        let r = brute_min_fvs(&triangle()).unwrap();
        assert_eq!(r.optimum, Extended::Finite(1));
        assert_eq!(r.witness, Some(vec![0]));
        let tree = graph("v a\nv b\nv c\nv d\ne a b\ne a c\ne c d");
        assert_eq!(brute_min_fvs(&tree).unwrap().optimum, Extended::Finite(0));
        let c4 = graph("v a\nv b\nv c\nv d\ne a b\ne b c\ne c d\ne d a");
        assert_eq!(brute_min_fvs(&c4).unwrap().optimum, Extended::Finite(1));
        assert_eq!(brute_max_forest(&c4).unwrap().optimum, Extended::Finite(3));
    }

    #[test]
    fn domination_examples() {
        let k1 = graph("v x 5");
        let r = brute_sigma_rho(&k1, &SigmaRhoSpec::cds()).unwrap();
        assert_eq!((r.optimum, r.witness), (Extended::Finite(5), Some(vec![0])));
        assert_eq!(brute_sigma_rho(&triangle(), &SigmaRhoSpec::cvc()).unwrap().optimum, Extended::Finite(2));
        let p4 = graph("v a\nv b\nv c\nv d\ne a b\ne b c\ne c d");
        let st = SigmaRhoSpec::steiner(vec!["a".into(), "d".into()]);
        assert_eq!(brute_sigma_rho(&p4, &st).unwrap().optimum, Extended::Finite(4));
        let r = brute_sigma_rho(&p4, &SigmaRhoSpec::cvc()).unwrap();
        assert_eq!(r.witness, Some(vec![1, 2]));
        let bad = SigmaRhoSpec::steiner(vec!["zz".into()]);
        assert_eq!(brute_sigma_rho(&p4, &bad), Err(OracleError::UnknownTerminal("zz".into())));
    }

    #[test]
    fn infeasible_is_identity() {
        // Two isolated vertices cannot be connected-dominated.
        let g = graph("v a\nv b");
        let r = brute_sigma_rho(&g, &SigmaRhoSpec::cds()).unwrap();
        assert_eq!(r.optimum, Extended::PosInf);
        assert_eq!(r.witness, None);
    }

    #[test]
    fn too_large() {
        let text: String = (0..21).map(|i| format!("v v{i}\n")).collect();
        assert!(matches!(brute_min_fvs(&graph(&text)), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(
            (0..=5).map(partition_count).collect::<Vec<_>>(),
            vec![1, 1, 2, 5, 15, 52]
        );
    }

    #[test]
    fn representative_examples() {
        let v = GroundSet::range(3);
        let a = WeightedPartitionSet::singleton(Partition::singletons(v), 5, Direction::Min);
        assert!(check_representative(&a, &a, QueryMode::Acyclic).unwrap());
        let empty = WeightedPartitionSet::new(v, Direction::Min);
        assert!(!check_representative(&a, &empty, QueryMode::Plain).unwrap());
    }
}
