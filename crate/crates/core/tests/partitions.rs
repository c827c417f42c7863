use cwsolve_core::partition::{acyclic, enumerate_partitions};
use cwsolve_core::{GroundSet, Partition};
use proptest::prelude::*;

/// A partition of `0..n` from per-element block choices.
fn partition_from(n: usize, choice: &[usize]) -> Partition {
    let mut blocks: Vec<Vec<u8>> = vec![Vec::new(); n.max(1)];
    for e in 0..n {
        blocks[choice[e] % n].push(e as u8);
    }
    Partition::canonicalize(blocks.into_iter().filter(|b| !b.is_empty()), GroundSet::range(n)).unwrap()
}

fn triple() -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (1usize..=6).prop_flat_map(|n| {
        let c = || proptest::collection::vec(0usize..6, n);
        (c(), c(), c()).prop_map(move |(a, b, d)| (partition_from(n, &a), partition_from(n, &b), partition_from(n, &d)))
    })
}

type Edges = Vec<(u8, u8)>;

/// Random forest on `0..n`: each vertex optionally points to an earlier one.
fn forest() -> impl Strategy<Value = (usize, Edges, Edges)> {
    (2usize..=7).prop_flat_map(|n| {
        let edges = move || {
            proptest::collection::vec(proptest::option::of(0usize..100), n - 1).prop_map(|parents| {
                parents
                    .iter()
                    .enumerate()
                    .filter_map(|(i, p)| p.map(|p| ((p % (i + 1)) as u8, i as u8 + 1)))
                    .collect::<Vec<_>>()
            })
        };
        (Just(n), edges(), edges())
    })
}

fn components(n: usize, edges: &[(u8, u8)]) -> Partition {
    let mut p = Partition::singletons(GroundSet::range(n));
    for &(a, b) in edges {
        let e = Partition::canonicalize([vec![a, b]], GroundSet::from_elements([a, b]).unwrap()).unwrap();
        p = p.join_extended(&e);
    }
    p
}

/// Union-find cycle test on an explicit edge multiset.
fn is_forest(n: usize, edges: &[(u8, u8)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x { x } else { let r = find(p, p[x]); p[x] = r; r }
    }
    edges.iter().all(|&(a, b)| {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        parent[ra] = rb;
        ra != rb
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn join_is_a_semilattice_with_neutral_singletons((p, q, r) in triple()) {
        prop_assert_eq!(p.join(&q).unwrap(), q.join(&p).unwrap());
        prop_assert_eq!(p.join(&q).unwrap().join(&r).unwrap(), p.join(&q.join(&r).unwrap()).unwrap());
        prop_assert_eq!(p.join(&p).unwrap(), p.clone());
        prop_assert_eq!(p.join(&Partition::singletons(p.ground())).unwrap(), p);
    }

    #[test]
    fn acyclic_chains_regroup((p, q, r) in triple()) {
        let lhs = acyclic(&p, &q).unwrap() && acyclic(&p.join(&q).unwrap(), &r).unwrap();
        let rhs = acyclic(&q, &r).unwrap() && acyclic(&p, &q.join(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn acyclic_means_union_of_forests_is_a_forest((n, ep, eq) in forest()) {
        let disjoint = ep.iter().all(|e| !eq.contains(e));
        let union: Vec<_> = ep.iter().chain(&eq).copied().collect();
        let expected = disjoint && is_forest(n, &union);
        prop_assert_eq!(acyclic(&components(n, &ep), &components(n, &eq)).unwrap(), expected);
    }

    #[test]
    fn restrict_then_extend_round_trips((p, _, _) in triple(), mask in 0u64..64) {
        let x = GroundSet::from_bits(mask & p.ground().bits());
        let kept = p.restrict(x).unwrap();
        prop_assert_eq!(kept.ground(), p.ground().difference(x));
        let back = kept.extend(x).unwrap();
        prop_assert_eq!(back.ground(), p.ground());
        prop_assert!(back.num_blocks() >= p.num_blocks() || x.is_empty());
    }
}

#[test]
fn bell_numbers() {
    let counts: Vec<usize> = (0..=6).map(|n| enumerate_partitions(GroundSet::range(n)).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    let all = enumerate_partitions(GroundSet::range(4)).unwrap();
    let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
    assert_eq!(distinct.len(), all.len());
    assert!(enumerate_partitions(GroundSet::range(9)).is_err());
}

#[test]
fn acyclic_examples() {
    let v = GroundSet::range(3);
    let p = Partition::canonicalize([vec![0u8, 1], vec![2]], v).unwrap();
    let q = Partition::canonicalize([vec![0u8], vec![1, 2]], v).unwrap();
    assert!(acyclic(&p, &q).unwrap());
    assert!(!acyclic(&p, &p).unwrap());
    assert!(acyclic(&Partition::singletons(v), &p).unwrap());
    assert!(acyclic(&p, &Partition::singletons(GroundSet::range(2))).is_err());
}
