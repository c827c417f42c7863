//! Expression builders: the trivial `k = n` expression of any graph and
//! low-width expressions for a few graph families.

use crate::expr::CwExpression;
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Clique,
    Path,
    Cycle,
    Star,
    RandomCograph,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 5] = [
        FixtureKind::Clique,
        FixtureKind::Path,
        FixtureKind::Cycle,
        FixtureKind::Star,
        FixtureKind::RandomCograph,
    ];
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Clique => "clique",
            FixtureKind::Path => "path",
            FixtureKind::Cycle => "cycle",
            FixtureKind::Star => "star",
            FixtureKind::RandomCograph => "random-cograph",
        })
    }
}

impl FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown fixture kind `{s}`"))
    }
}

/// Vertex `i` gets label `i + 1`; all vertices are unioned, then one add per edge.
///
/// Panics if `g` has no vertices or more vertices than labels.
pub fn naive_expression(g: &Graph) -> CwExpression {
    assert!(g.n() >= 1, "naive expression needs at least one vertex");
    assert!(g.n() <= crate::expr::MAX_LABELS, "too many vertices for one label each");
    let leaf = |v: u32| {
        let e = CwExpression::vertex(g.name(v), Some(g.weight(v)));
        if v == 0 {
            e
        } else {
            e.ren(1, v as u8 + 1)
        }
    };
    let mut e = leaf(0);
    for v in 1..g.n() as u32 {
        e = e.union(leaf(v));
    }
    for (a, b) in g.edges() {
        e = e.add(a as u8 + 1, b as u8 + 1);
    }
    e.with_k(g.n())
}

fn name(i: usize) -> String {
    format!("x{}", i + 1)
}

fn vertex(i: usize) -> CwExpression {
    CwExpression::vertex(&name(i), None)
}

/// `K_n` as a 2-expression: repeatedly flatten to label 1 and join a new vertex on label 2.
pub fn clique(n: usize) -> CwExpression {
    assert!(n >= 1);
    let mut e = vertex(0).with_k(2);
    for i in 1..n {
        if i > 1 {
            e = e.ren(2, 1);
        }
        e = e.union(vertex(i).ren(1, 2)).add(1, 2);
    }
    e
}

/// `P_n`: label 2 marks the current end, 3 the interior, 1 the newcomer.
pub fn path(n: usize) -> CwExpression {
    assert!(n >= 1);
    let mut e = vertex(0);
    for i in 1..n {
        if i == 1 {
            e = e.ren(1, 2);
        } else {
            e = e.ren(2, 3).ren(1, 2);
        }
        e = e.union(vertex(i)).add(1, 2);
    }
    e
}

/// `C_n` (`n ≥ 3`) as a 4-expression: label 4 keeps the first vertex so the
/// last one can close the cycle. Smaller `n` yields the path.
pub fn cycle(n: usize) -> CwExpression {
    if n < 3 {
        return path(n);
    }
    let mut e = vertex(0).ren(1, 4).union(vertex(1)).add(1, 4).ren(1, 2);
    for i in 2..n - 1 {
        e = e.union(vertex(i)).add(1, 2).ren(2, 3).ren(1, 2);
    }
    e.union(vertex(n - 1)).add(1, 2).add(1, 4)
}

/// `K_{1,n−1}` with centre `x1`.
pub fn star(n: usize) -> CwExpression {
    assert!(n >= 1);
    if n == 1 {
        return vertex(0);
    }
    let mut leaves = vertex(1);
    for i in 2..n {
        leaves = leaves.union(vertex(i));
    }
    vertex(0).ren(1, 2).union(leaves).add(1, 2)
}

/// A random cograph: vertices are merged pairwise by disjoint union or complete join.
pub fn random_cograph(n: usize, seed: u64) -> CwExpression {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: Vec<CwExpression> = (0..n).map(vertex).collect();
    while parts.len() > 1 {
        let a = parts.swap_remove(rng.gen_range(0..parts.len()));
        let b = parts.swap_remove(rng.gen_range(0..parts.len()));
        let merged = if rng.gen_bool(0.5) {
            a.union(b)
        } else {
            a.union(b.ren(1, 2)).add(1, 2).ren(2, 1)
        };
        parts.push(merged);
    }
    parts.pop().expect("n >= 1").with_k(2)
}

pub fn fixture(kind: FixtureKind, n: usize, seed: u64) -> CwExpression {
    match kind {
        FixtureKind::Clique => clique(n),
        FixtureKind::Path => path(n),
        FixtureKind::Cycle => cycle(n),
        FixtureKind::Star => star(n),
        FixtureKind::RandomCograph => random_cograph(n, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_matches_hand_written_triangle() {
        let k3 = "(add 1 2 (u (ren 2 1 (add 1 2 (u (v x1) (ren 1 2 (v x2))))) (ren 1 2 (v x3))))";
        assert_eq!(clique(3).term_string(), k3);
        let k4 = clique(4);
        assert_eq!(k4.k(), 2);
        assert_eq!(k4.evaluate().graph.num_edges(), 6);
    }

    #[test]
    fn family_shapes() {
        let p2 = path(2);
        assert!(p2.k() <= 3);
        assert_eq!(p2.evaluate().graph.num_edges(), 1);
        let p5 = path(5).evaluate().graph;
        assert_eq!(p5.num_edges(), 4);
        assert!((0..5).all(|v| p5.degree(v) <= 2));
        let c3 = cycle(3).evaluate().graph;
        assert_eq!(c3.num_edges(), 3);
        for n in 3..9 {
            let c = cycle(n);
            assert_eq!(c.k(), 4);
            let g = c.evaluate().graph;
            assert_eq!(g.num_edges(), n);
            assert!((0..n as u32).all(|v| g.degree(v) == 2));
            assert_eq!(g.induced_components((1 << n) - 1), 1);
        }
        let s = star(5);
        assert_eq!(s.k(), 2);
        let g = s.evaluate().graph;
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.num_edges(), 4);
    }

    #[test]
    fn fixtures_are_irredundant() {
        for kind in FixtureKind::ALL {
            for n in 1..=9 {
                for seed in 0..3 {
                    let e = fixture(kind, n, seed);
                    e.validate().unwrap();
                    assert!(e.check_irredundant().is_empty(), "{kind} n={n}");
                    assert_eq!(e.num_vertices(), n);
                }
            }
        }
    }

    #[test]
    fn clique_unary_count_is_linear() {
        for n in [10, 50, 100] {
            assert!(clique(n).unary_count() <= 3 * n);
        }
    }

    #[test]
    fn random_cograph_is_deterministic() {
        assert_eq!(random_cograph(8, 7), random_cograph(8, 7));
        let differs = (0..10).any(|s| random_cograph(8, s) != random_cograph(8, 7));
        assert!(differs);
    }

    #[test]
    fn naive_small_cases() {
        let g = Graph::parse("v a 4").unwrap();
        assert_eq!(naive_expression(&g).term_string(), "(v a 4)");
        let g = Graph::parse("v a\nv b\nv c").unwrap();
        let e = naive_expression(&g);
        assert_eq!(e.k(), 3);
        assert_eq!(e.unary_count(), 2);
        let g = Graph::parse("v a\nv b\nv c\ne a b\ne b c\ne a c").unwrap();
        let e = naive_expression(&g);
        assert!(e.check_irredundant().is_empty());
        assert_eq!(e.evaluate().graph.named_edges(), g.named_edges());
    }
}
