#![allow(dead_code)]

use cwsolve_core::fixtures::{self, naive_expression, FixtureKind};
use cwsolve_core::ops::WeightedPartition;
use cwsolve_core::{CwExpression, Direction, Graph, GroundSet, Partition, WeightedPartitionSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish random partition: each element picks a block label at random.
pub fn random_partition<R: Rng>(rng: &mut R, ground: GroundSet) -> Partition {
    let n = ground.len().max(1);
    let mut blocks: Vec<Vec<u8>> = vec![Vec::new(); n];
    for e in ground.iter() {
        blocks[rng.gen_range(0..n)].push(e);
    }
    Partition::canonicalize(blocks.into_iter().filter(|b| !b.is_empty()), ground).unwrap()
}

pub fn random_set<R: Rng>(rng: &mut R, ground: GroundSet, dir: Direction, max_entries: usize) -> WeightedPartitionSet {
    let count = rng.gen_range(0..=max_entries);
    let entries: Vec<WeightedPartition> = (0..count)
        .map(|_| WeightedPartition::new(random_partition(rng, ground), rng.gen_range(0..20)))
        .collect();
    cwsolve_core::ops::rmc(ground, dir, entries).unwrap()
}

pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    if rng.gen_bool(0.5) {
        Direction::Max
    } else {
        Direction::Min
    }
}

pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub expr: CwExpression,
}

/// 200 seeded random graphs (n ≤ 7, weights 0..10) under the naive expression,
/// plus every fixture family with n ≤ 7.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=7);
        let p = r.gen_range(0.2..0.8);
        let graph = Graph::random(&mut r, n, p, 10);
        let expr = naive_expression(&graph);
        out.push(Instance {
            name: format!("random seed={seed} n={n}"),
            graph,
            expr,
        });
    }
    for kind in FixtureKind::ALL {
        for n in 1..=7 {
            let expr = fixtures::fixture(kind, n, n as u64);
            let graph = expr.evaluate().graph;
            out.push(Instance {
                name: format!("{kind} n={n}"),
                graph,
                expr,
            });
        }
    }
    out
}

/// 1–3 distinct terminal names drawn with a seed derived from the instance index.
pub fn terminals(graph: &Graph, index: usize) -> Vec<String> {
    let mut r = rng(10_000 + index as u64);
    let want = r.gen_range(1..=3).min(graph.n());
    let mut picked: Vec<u32> = Vec::new();
    while picked.len() < want {
        let v = r.gen_range(0..graph.n() as u32);
        if !picked.contains(&v) {
            picked.push(v);
        }
    }
    picked.iter().map(|&v| graph.name(v).to_string()).collect()
}
