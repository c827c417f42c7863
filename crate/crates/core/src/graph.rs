//! Vertex-weighted simple graphs and the plain-text graph file format.
//!
//! ```text
//! ; comment
//! v a 3
//! v b
//! e a b
//! ```

use rand::Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An undirected simple graph with named, weighted vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    weights: Vec<u64>,
    adj: Vec<Vec<u32>>,
    index: HashMap<String, u32>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str, weight: u64) -> Result<u32, GraphError> {
        if !valid_name(name) {
            return Err(GraphError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.weights.push(weight);
        self.adj.push(Vec::new());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, a: u32, b: u32) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(self.names[a as usize].clone()));
        }
        if self.has_edge(a, b) {
            return Err(GraphError::DuplicateEdge(
                self.names[a as usize].clone(),
                self.names[b as usize].clone(),
            ));
        }
        let (ua, ub) = (a as usize, b as usize);
        let pos = self.adj[ua].binary_search(&b).unwrap_err();
        self.adj[ua].insert(pos, b);
        let pos = self.adj[ub].binary_search(&a).unwrap_err();
        self.adj[ub].insert(pos, a);
        Ok(())
    }

    pub fn add_edge_by_name(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let ia = self.id(a).ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
        let ib = self.id(b).ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
        self.add_edge(ia, ib)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, v: u32) -> u64 {
        self.weights[v as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, ns)| {
            ns.iter()
                .filter(move |&&b| (a as u32) < b)
                .map(move |&b| (a as u32, b))
        })
    }

    /// Edge set expressed with vertex names, each pair sorted; for comparisons across graphs.
    pub fn named_edges(&self) -> std::collections::BTreeSet<(String, String)> {
        self.edges()
            .map(|(a, b)| {
                let (x, y) = (self.name(a).to_string(), self.name(b).to_string());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split([';', '#']).next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let syntax = |message: &str| GraphError::Syntax {
                line,
                message: message.to_string(),
            };
            match fields.as_slice() {
                ["v", name] => {
                    g.add_vertex(name, 1)?;
                }
                ["v", name, w] => {
                    let w = w.parse().map_err(|_| syntax("weight must be a non-negative integer"))?;
                    g.add_vertex(name, w)?;
                }
                ["e", a, b] => g.add_edge_by_name(a, b)?,
                _ => return Err(syntax("expected `v NAME [WEIGHT]` or `e NAME NAME`")),
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, w) in self.names.iter().zip(&self.weights) {
            let _ = writeln!(out, "v {name} {w}");
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "e {} {}", self.name(a), self.name(b));
        }
        out
    }

    /// `G(n, p)` with vertices `x1..xn` and weights uniform in `0..=max_weight`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, edge_prob: f64, max_weight: u64) -> Graph {
        let mut g = Graph::new();
        for v in 0..n {
            let w = rng.gen_range(0..=max_weight);
            g.add_vertex(&format!("x{}", v + 1), w).expect("fresh name");
        }
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if rng.gen_bool(edge_prob) {
                    g.add_edge(a, b).expect("fresh edge");
                }
            }
        }
        g
    }

    /// Number of connected components of the subgraph induced by `mask` (n ≤ 64).
    pub fn induced_components(&self, mask: u64) -> usize {
        let mut seen = 0u64;
        let mut count = 0;
        let mut rest = mask;
        while rest != 0 {
            let start = rest.trailing_zeros();
            count += 1;
            let mut stack = vec![start];
            seen |= 1 << start;
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if mask >> u & 1 == 1 && seen >> u & 1 == 0 {
                        seen |= 1 << u;
                        stack.push(u);
                    }
                }
            }
            rest = mask & !seen;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = Graph::parse("; triangle\nv a 3\nv b\nv c 0\ne a b\ne b c\ne c a\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.weights(), &[3, 1, 0]);
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Graph::parse("v a\nv a"), Err(GraphError::DuplicateVertex(_))));
        assert!(matches!(Graph::parse("v a\ne a b"), Err(GraphError::UnknownVertex(_))));
        assert!(matches!(Graph::parse("v a\ne a a"), Err(GraphError::SelfLoop(_))));
        assert!(matches!(
            Graph::parse("v a\nv b\ne a b\ne b a"),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(Graph::parse("x y"), Err(GraphError::Syntax { line: 1, .. })));
        assert!(matches!(Graph::parse("v a -1"), Err(GraphError::Syntax { .. })));
    }

    #[test]
    fn components() {
        let g = Graph::parse("v a\nv b\nv c\nv d\ne a b\ne c d").unwrap();
        assert_eq!(g.induced_components(0b1111), 2);
        assert_eq!(g.induced_components(0b0101), 2);
        assert_eq!(g.induced_components(0), 0);
    }
}
