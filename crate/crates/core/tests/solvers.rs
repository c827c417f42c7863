mod common;

use common::{corpus, terminals};
use cwsolve_core::fixtures::{self, naive_expression, FixtureKind};
use cwsolve_core::fvs::solve_fvs;
use cwsolve_core::oracle::{brute_max_forest, brute_min_fvs, brute_sigma_rho};
use cwsolve_core::sigma_rho::{solve_sigma_rho, SigmaRhoSpec, Variant};
use cwsolve_core::{Extended, Graph, SolveError, SolveOptions};

fn witness_opts() -> SolveOptions {
    SolveOptions {
        with_witness: true,
        ..SolveOptions::default()
    }
}

fn mask(vs: &[u32]) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

fn weight(g: &Graph, vs: &[u32]) -> u64 {
    vs.iter().map(|&v| g.weight(v)).sum()
}

fn is_forest(g: &Graph, keep: u32) -> bool {
    let edges = g.edges().filter(|&(a, b)| keep >> a & 1 == 1 && keep >> b & 1 == 1).count();
    edges + g.induced_components(keep as u64) == keep.count_ones() as usize
}

#[test]
fn fvs_witnesses_are_valid() {
    for inst in corpus() {
        let r = solve_fvs(&inst.expr, &witness_opts()).unwrap();
        let forest = r.forest.unwrap();
        let fvs = r.fvs.unwrap();
        assert_eq!(forest.len() + fvs.len(), inst.graph.n());
        assert!(is_forest(&inst.graph, mask(&forest)), "{}", inst.name);
        assert_eq!(weight(&inst.graph, &forest), r.forest_weight, "{}", inst.name);
        assert_eq!(weight(&inst.graph, &fvs), r.fvs_weight);
        assert_eq!(r.forest_weight + r.fvs_weight, inst.graph.total_weight());
    }
}

#[test]
fn trees_need_no_deletion() {
    for n in 1..=30 {
        for e in [fixtures::path(n), fixtures::star(n)] {
            assert_eq!(solve_fvs(&e, &SolveOptions::default()).unwrap().fvs_weight, 0);
        }
    }
}

#[test]
fn oracle_paths_agree() {
    for inst in corpus() {
        let a = brute_min_fvs(&inst.graph).unwrap().optimum;
        let b = brute_max_forest(&inst.graph).unwrap().optimum;
        let total = inst.graph.total_weight();
        assert_eq!(a, Extended::Finite(total - b.finite().unwrap()), "{}", inst.name);
    }
}

fn check_domination_witness(g: &Graph, spec: &SigmaRhoSpec, x: &[u32]) {
    let xm = mask(x);
    let all = (1u32 << g.n()) - 1;
    assert!(g.induced_components(xm as u64) <= 1);
    let dom = match spec.variant {
        Variant::Co => all & !xm,
        _ => xm,
    };
    if let Variant::Steiner(t) = &spec.variant {
        assert!(t.iter().all(|name| xm >> g.id(name).unwrap() & 1 == 1));
        return;
    }
    for u in 0..g.n() as u32 {
        let c = g.neighbors(u).iter().filter(|&&v| dom >> v & 1 == 1).count() as u32;
        let ok = if dom >> u & 1 == 1 { spec.sigma.contains(c) } else { spec.rho.contains(c) };
        assert!(ok, "vertex {u} violates the domination constraint");
    }
}

fn specs(inst: &common::Instance, index: usize) -> Vec<SigmaRhoSpec> {
    vec![
        SigmaRhoSpec::cds(),
        SigmaRhoSpec::ctds(),
        SigmaRhoSpec::perfect_cds(),
        SigmaRhoSpec::cvc(),
        SigmaRhoSpec::d_regular(1),
        SigmaRhoSpec::steiner(terminals(&inst.graph, index)),
    ]
}

#[test]
fn domination_witnesses_are_valid() {
    for (index, inst) in corpus().iter().enumerate() {
        for spec in specs(inst, index) {
            let r = solve_sigma_rho(&inst.expr, &spec, &witness_opts()).unwrap();
            match r.optimum {
                Extended::Finite(w) => {
                    let x = r.witness.expect("feasible result carries a witness");
                    assert_eq!(weight(&inst.graph, &x), w, "{} {spec:?}", inst.name);
                    check_domination_witness(&inst.graph, &spec, &x);
                }
                _ => assert!(r.witness.is_none()),
            }
        }
    }
}

#[test]
fn regular_subgraphs_match_the_oracle() {
    for inst in corpus() {
        for d in 0..=2 {
            let spec = SigmaRhoSpec::d_regular(d);
            let got = solve_sigma_rho(&inst.expr, &spec, &SolveOptions::default()).unwrap();
            assert_eq!(got.optimum, brute_sigma_rho(&inst.graph, &spec).unwrap().optimum, "{} d={d}", inst.name);
        }
    }
}

#[test]
fn options_do_not_change_optima() {
    let parallel = SolveOptions { parallel: true, ..SolveOptions::default() };
    // Lookahead only prunes co-variant tables.
    let lookahead = SolveOptions { lookahead: true, ..SolveOptions::default() };
    for (index, inst) in corpus().iter().enumerate() {
        for spec in specs(inst, index) {
            let base = solve_sigma_rho(&inst.expr, &spec, &SolveOptions::default()).unwrap();
            assert_eq!(solve_sigma_rho(&inst.expr, &spec, &parallel).unwrap().optimum, base.optimum);
            if spec.is_co() {
                assert_eq!(solve_sigma_rho(&inst.expr, &spec, &lookahead).unwrap().optimum, base.optimum);
            }
        }
        let base = solve_fvs(&inst.expr, &SolveOptions::default()).unwrap().fvs_weight;
        assert_eq!(solve_fvs(&inst.expr, &parallel).unwrap().fvs_weight, base);
    }
}

#[test]
fn lookahead_shrinks_co_tables() {
    let e = fixtures::clique(30);
    let plain = solve_sigma_rho(&e, &SigmaRhoSpec::cvc(), &SolveOptions::default()).unwrap();
    let look = solve_sigma_rho(&e, &SigmaRhoSpec::cvc(), &SolveOptions { lookahead: true, ..SolveOptions::default() }).unwrap();
    assert_eq!(plain.optimum, look.optimum);
    assert!(look.stats.max_table_cells <= plain.stats.max_table_cells);
}

#[test]
fn universal_vertex_never_hurts_cds() {
    for kind in FixtureKind::ALL {
        for n in 1..=7 {
            let g = fixtures::fixture(kind, n, 3).evaluate().graph;
            let mut h = g.clone();
            let u = h.add_vertex("hub", 0).unwrap();
            for v in 0..g.n() as u32 {
                h.add_edge(u, v).unwrap();
            }
            let before = solve_sigma_rho(&naive_expression(&g), &SigmaRhoSpec::cds(), &SolveOptions::default()).unwrap();
            let after = solve_sigma_rho(&naive_expression(&h), &SigmaRhoSpec::cds(), &SolveOptions::default()).unwrap();
            assert!(after.optimum <= before.optimum, "{kind} n={n}");
            assert_eq!(after.optimum, Extended::Finite(0));
        }
    }
}

#[test]
fn cell_bounds_at_width_two() {
    for n in [10, 50, 100] {
        let e = fixtures::clique(n);
        assert!(solve_fvs(&e, &SolveOptions::default()).unwrap().stats.max_cell_entries <= 3 << 2);
        for spec in [SigmaRhoSpec::cds(), SigmaRhoSpec::ctds(), SigmaRhoSpec::cvc()] {
            let r = solve_sigma_rho(&e, &spec, &SolveOptions::default()).unwrap();
            assert!(r.stats.max_cell_entries <= 2);
        }
    }
}

#[test]
fn redundant_input_is_rejected() {
    let e = cwsolve_core::parse_expression("(add 1 2 (add 1 2 (u (v a) (ren 1 2 (v b)))))").unwrap();
    assert!(matches!(solve_fvs(&e, &SolveOptions::default()), Err(SolveError::NotIrredundant(_))));
    assert!(matches!(
        solve_sigma_rho(&e, &SigmaRhoSpec::cds(), &SolveOptions::default()),
        Err(SolveError::NotIrredundant(_))
    ));
}

#[test]
fn wide_expressions_are_rejected() {
    let text: String = (0..20).map(|i| format!("v x{i}\n")).collect();
    let e = naive_expression(&Graph::parse(&text).unwrap());
    assert!(matches!(
        solve_sigma_rho(&e, &SigmaRhoSpec::cds(), &SolveOptions::default()),
        Err(SolveError::TooManyLabels { .. })
    ));
}
