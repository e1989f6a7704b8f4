use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use mrt_bench::exchange_chain;
use mrt_core::gen::gen_grid;
use mrt_core::netgraph::{compute_coverage, update_coverage_after_exchange};

fn coverage(c: &mut Criterion) {
    let (net, tree) = gen_grid(20, 20).unwrap();
    let chain = exchange_chain(&net, &tree, 100, 1);
    let start = || (tree.clone(), compute_coverage(&net, &tree));
    let mut g = c.benchmark_group("coverage_20x20_100_exchanges");
    g.bench_function("incremental", |b| {
        b.iter_batched(
            start,
            |(mut t, mut cov)| {
                for &(e, s) in &chain {
                    (t, cov) = update_coverage_after_exchange(&net, &t, cov, e, s).unwrap();
                }
                cov
            },
            BatchSize::SmallInput,
        )
    });
    g.bench_function("full", |b| {
        b.iter_batched(
            start,
            |(mut t, mut cov)| {
                for &(e, s) in &chain {
                    t = t.exchange(&net, e, s).unwrap();
                    cov = compute_coverage(&net, &t);
                }
                cov
            },
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, coverage);
criterion_main!(benches);
