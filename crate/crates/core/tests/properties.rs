use itertools::Itertools;
use proptest::prelude::*;

use mrt_core::gen::{brute_force_joint, gen_random_mssc, gen_random_network};
use mrt_core::localsearch::{branch_exchange, Objective, SearchOptions};
use mrt_core::lp::{build_mssc_lp, solve_lp, SolverOptions};
use mrt_core::mssc::{
    exact_order_dp, greedy_order, instance_from_coverage, pad_to_uniform, parse_hypergraph,
    write_hypergraph, MsscInstance, TieRule,
};
use mrt_core::netgraph::{
    compute_coverage, evaluate_metrics, update_coverage_after_exchange, UncoveredMode,
};
use mrt_core::prep::{ingest_readers, write_csv};

fn brute_force(inst: &MsscInstance) -> f64 {
    (0..inst.vertex_count())
        .permutations(inst.vertex_count())
        .map(|p| inst.evaluate(&p).unwrap().objective)
        .fold(f64::INFINITY, f64::min)
}

fn instance() -> impl Strategy<Value = MsscInstance> {
    (2usize..=6, 1usize..=8, any::<u64>())
        .prop_flat_map(|(n, m, seed)| (Just(n), Just(m), 1..=n.min(3), Just(seed)))
        .prop_map(|(n, m, c, seed)| gen_random_mssc(n, m, c, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_brute_force(inst in instance()) {
        let exact = exact_order_dp(&inst).unwrap();
        prop_assert!((exact.objective - brute_force(&inst)).abs() < 1e-9);
        prop_assert_eq!(&inst.evaluate(&exact.order).unwrap(), &exact);
        let greedy = greedy_order(&inst, TieRule::Lexicographic).unwrap();
        prop_assert!(exact.objective <= greedy.objective + 1e-9);
    }

    #[test]
    fn lp_is_a_lower_bound(inst in instance()) {
        let lp = build_mssc_lp(&inst, None).unwrap();
        let sol = solve_lp(&lp.model, &SolverOptions::default()).unwrap();
        let exact = exact_order_dp(&inst).unwrap();
        prop_assert!(sol.objective <= exact.objective + 1e-9);
        prop_assert!(sol.max_violation <= 1e-7);
        // the integral point of the optimum is feasible and has the same cost
        let x = lp.integral_point(&exact);
        prop_assert!(lp.model.max_violation(&x) <= 1e-9);
        prop_assert!((lp.model.objective(&x) - exact.objective).abs() < 1e-9);
    }

    #[test]
    fn padding_keeps_the_optimum(inst in instance()) {
        let c = inst.uniformity() + 1;
        let padded = pad_to_uniform(&inst, c).unwrap();
        prop_assert_eq!(padded.uniformity(), c);
        prop_assert!(padded.edges().iter().all(|e| e.vertices.len() == c));
        let a = exact_order_dp(&inst).unwrap().objective;
        let b = exact_order_dp(&padded).unwrap().objective;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn hypergraph_text_round_trips(inst in instance()) {
        prop_assert_eq!(parse_hypergraph(&write_hypergraph(&inst)).unwrap(), inst);
    }

    #[test]
    fn incremental_coverage_matches(n in 3usize..=25, extra in 1usize..=10, seed: u64, picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 1..30)) {
        let (net, mut tree) = gen_random_network(n, extra, seed).unwrap();
        let mut cov = compute_coverage(&net, &tree);
        for (ie, is) in picks {
            let covered: Vec<_> = tree.tree_edges().iter().copied().filter(|&e| !cov.covering(e).is_empty()).collect();
            if covered.is_empty() {
                break;
            }
            let e = *ie.get(&covered);
            let s = *is.get(cov.covering(e));
            let (next, next_cov) = update_coverage_after_exchange(&net, &tree, cov, e, s).unwrap();
            prop_assert_eq!(&next_cov, &compute_coverage(&net, &next));
            tree = next;
            cov = next_cov;
        }
    }

    #[test]
    fn network_csv_round_trips(n in 2usize..=20, extra in 0usize..=6, seed: u64) {
        let (net, tree) = gen_random_network(n, extra, seed).unwrap();
        let (buses, lines) = write_csv(&net, &tree);
        let (net2, tree2) = ingest_readers(buses.as_bytes(), "buses", lines.as_bytes(), "lines").unwrap();
        prop_assert_eq!(net2.vertex_count(), net.vertex_count());
        prop_assert_eq!(tree2.tree_edges(), tree.tree_edges());
        prop_assert!((net2.total_demand() - net.total_demand()).abs() < 1e-9);
        for (a, b) in net.edges().iter().zip(net2.edges()) {
            prop_assert_eq!(&a.name, &b.name);
            prop_assert!((a.failure - b.failure).abs() <= 1e-12 * a.failure.abs().max(1.0));
        }
    }
}

#[test]
fn search_is_seeded() {
    let (net, tree) = gen_random_network(14, 8, 3).unwrap();
    for seed in 0..5 {
        let opts = SearchOptions {
            seed,
            ..SearchOptions::default()
        };
        let a = branch_exchange(&net, &tree, &opts).unwrap();
        let b = branch_exchange(&net, &tree, &opts).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.order, b.order);
        assert_eq!(a.tree.tree_edges(), b.tree.tree_edges());
    }
}

#[test]
fn search_never_beats_enumeration() {
    for seed in 0..6 {
        let (net, tree) = gen_random_network(6, 3, 40 + seed).unwrap();
        for objective in [Objective::RTime, Objective::Energy] {
            let best = brute_force_joint(&net, objective).unwrap();
            let found = branch_exchange(
                &net,
                &tree,
                &SearchOptions {
                    objective,
                    seed,
                    ..SearchOptions::default()
                },
            )
            .unwrap();
            assert!(
                best.value <= found.objective() + 1e-9,
                "{objective}: {} < {}",
                found.objective(),
                best.value
            );
        }
    }
}

#[test]
fn exact_network_order_matches_metrics() {
    for seed in 0..10 {
        let (net, tree) = gen_random_network(12, 7, seed).unwrap();
        let cov = compute_coverage(&net, &tree);
        let p: Vec<f64> = net.edges().iter().map(|e| e.failure).collect();
        let ci = instance_from_coverage(&net, &tree, &cov, &p).unwrap();
        let ord = exact_order_dp(&ci.instance).unwrap();
        let m =
            evaluate_metrics(&net, &tree, &ci.switch_order(&ord), UncoveredMode::Exclude).unwrap();
        assert!((m.r_time - ord.normalized(&ci.instance)).abs() < 1e-9);
    }
}
