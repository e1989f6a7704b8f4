use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mrt_core::gen::gen_random_mssc;
use mrt_core::lp::{build_mssc_lp, solve_lp, SolverOptions};
use mrt_core::mssc::{alpha_point_round, exact_order_dp, greedy_order, KernelSpec, TieRule};

fn orderers(c: &mut Criterion) {
    let mut g = c.benchmark_group("order");
    for n in [10, 14, 18] {
        let inst = gen_random_mssc(n, 2 * n, 3, 5).unwrap();
        g.bench_with_input(BenchmarkId::new("greedy", n), &inst, |b, i| {
            b.iter(|| greedy_order(i, TieRule::Lexicographic).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exact", n), &inst, |b, i| {
            b.iter(|| exact_order_dp(i).unwrap())
        });
    }
    g.finish();
}

fn simplex(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp");
    g.sample_size(20);
    for n in [8, 12, 16] {
        let inst = gen_random_mssc(n, 2 * n, 3, 9).unwrap();
        let lp = build_mssc_lp(&inst, None).unwrap();
        g.bench_with_input(BenchmarkId::new("simplex", n), &lp, |b, lp| {
            b.iter(|| solve_lp(&lp.model, &SolverOptions::default()).unwrap())
        });
        let sol = solve_lp(&lp.model, &SolverOptions::default()).unwrap();
        let schedule = lp.schedule(&sol).unwrap();
        let kernel = KernelSpec::for_uniformity(3);
        g.bench_with_input(BenchmarkId::new("alpha_100", n), &inst, |b, i| {
            b.iter(|| alpha_point_round(i, &schedule, &kernel, 0, 100).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, orderers, simplex);
criterion_main!(benches);
