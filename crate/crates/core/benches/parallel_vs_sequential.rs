//! Efficiency map over a (q, T) lattice through the parallel and the
//! sequential executor.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sfg_core::analytic::{efficiency_at, optimal_p_refined};
use sfg_core::exec::{is_parallel, map_collect, map_collect_seq};

fn lattice() -> Vec<(f64, f64)> {
    let qs: Vec<f64> = (0..21).map(|i| 10f64.powf(-3.0 + 0.3 * i as f64)).collect();
    let ts: Vec<f64> = (0..21).map(|i| -3.0 + 0.3 * i as f64).collect();
    qs.iter().flat_map(|&q| ts.iter().map(move |&t| (q, t))).collect()
}

fn optimum_map(c: &mut Criterion) {
    let points = lattice();
    let work = |&(q, t): &(f64, f64)| {
        let (p, _) = optimal_p_refined(q, t).unwrap();
        efficiency_at(p, q, t).unwrap()
    };
    let mut group = c.benchmark_group("optimal_efficiency_441");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| map_collect_seq(black_box(&points), work)));
    let label = if is_parallel() { "parallel" } else { "parallel_feature_off" };
    group.bench_function(label, |b| b.iter(|| map_collect(black_box(&points), work)));
    group.finish();
}

criterion_group!(benches, optimum_map);
criterion_main!(benches);
