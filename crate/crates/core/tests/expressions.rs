mod common;

use common::rng;
use cwsolve_core::expr::Redundancy;
use cwsolve_core::fixtures::{self, naive_expression, FixtureKind};
use cwsolve_core::{parse_expression, CwExpression, ExprError, Graph};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn serialize_then_parse_is_identity_on_fixtures() {
    let mut count = 0;
    for kind in FixtureKind::ALL {
        for n in 1..=40 {
            for seed in 0..5 {
                let e = fixtures::fixture(kind, n, seed);
                assert_eq!(parse_expression(&e.serialize()).unwrap(), e);
                count += 1;
            }
        }
    }
    assert_eq!(count, 1_000);
}

#[test]
fn naive_expression_reproduces_the_graph() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let p = r.gen_range(0.0..1.0);
        let g = Graph::random(&mut r, n, p, 10);
        let e = naive_expression(&g);
        assert!(e.check_irredundant().is_empty());
        let h = e.evaluate().graph;
        assert_eq!(h.names(), g.names());
        assert_eq!(h.weights(), g.weights());
        assert_eq!(h.named_edges(), g.named_edges());
        assert_eq!(parse_expression(&e.serialize()).unwrap(), e);
    }
}

#[test]
fn unary_counts_stay_small() {
    for n in [10, 40, 100] {
        // Hard bound for cliques: linear in n.
        assert!(fixtures::clique(n).unary_count() <= 3 * n);
        for kind in FixtureKind::ALL {
            let e = fixtures::fixture(kind, n, 1);
            let k = e.k();
            assert!(e.unary_count() <= 2 * n * k * k, "{kind} n={n}");
        }
    }
}

#[test]
fn double_add_is_fully_redundant() {
    let e = parse_expression("(add 1 2 (add 1 2 (u (v a) (ren 1 2 (v b)))))").unwrap();
    let report = e.check_irredundant();
    assert_eq!(report.len(), 1);
    assert_eq!(report[0].kind, Redundancy::Full);
    let stripped = e.strip_redundant_adds().unwrap();
    assert!(stripped.check_irredundant().is_empty());
    assert_eq!(stripped.evaluate().graph.num_edges(), 1);
}

#[test]
fn partial_redundancy_cannot_be_stripped() {
    // a–c exists, b–c does not; add 1 2 would need to insert only one of two pairs.
    let e = parse_expression("(add 1 2 (u (add 1 3 (u (v a) (ren 1 3 (v c)))) (v b)))");
    let e = e.unwrap_or_else(|err| panic!("{err}"));
    let e = e.ren(3, 2).add(1, 2);
    let report = e.check_irredundant();
    assert!(report.iter().any(|r| r.kind == Redundancy::Partial));
    assert!(matches!(e.strip_redundant_adds(), Err(ExprError::PartiallyRedundant { .. })));
}

#[test]
fn header_is_optional_and_checked() {
    let bare = parse_expression("(u (v a) (v b))").unwrap();
    assert_eq!(bare.k(), 1);
    let declared = parse_expression("cwexpr k=3\n(u (v a) (ren 1 3 (v b)))").unwrap();
    assert_eq!(declared.k(), 3);
    assert!(parse_expression("cwexpr k=2\n(ren 1 3 (v a))").is_err());
    assert!(parse_expression("(u (v a) (v a))").is_err());
    assert!(parse_expression("(ren 1 1 (v a))").is_err());
    assert!(parse_expression("(u (v a)").is_err());
}

fn arbitrary_expression() -> impl Strategy<Value = CwExpression> {
    // Merge weighted leaves right to left, sprinkling unary operations in between.
    (proptest::collection::vec(proptest::option::of(0u64..50), 1..12), proptest::collection::vec((0u8..4, 1u8..5, 1u8..5), 0..20)).prop_map(
        |(leaves, ops)| {
            let mut parts: Vec<CwExpression> = leaves
                .iter()
                .enumerate()
                .map(|(i, w)| CwExpression::vertex(&format!("v{i}"), *w))
                .collect();
            let mut ops = ops.into_iter();
            while parts.len() > 1 {
                let b = parts.pop().unwrap();
                let a = parts.pop().unwrap();
                let mut m = a.union(b);
                if let Some((kind, i, j)) = ops.next() {
                    m = match kind {
                        0 if i != j => m.ren(i, j),
                        1 if i != j => m.add(i, j),
                        _ => m,
                    };
                }
                parts.push(m);
            }
            parts.pop().unwrap().with_k(4)
        },
    )
}

proptest! {
    #[test]
    fn round_trip_of_arbitrary_terms(e in arbitrary_expression()) {
        let text = e.serialize();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(back.term_string(), e.term_string());
        prop_assert_eq!(back.evaluate(), e.evaluate());
    }
}
