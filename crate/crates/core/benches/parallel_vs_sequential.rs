use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use relthue::binomial::{batch, Constraints};
use relthue::relthue::SearchConfig;

fn config(workers: usize) -> SearchConfig {
    SearchConfig { size_bound_log10: 50, workers, ..SearchConfig::default() }
}

fn reductions(c: &mut Criterion) {
    let mut group = c.benchmark_group("binomial_batch_d3_m12");
    group.sample_size(10);
    for (name, workers) in [("sequential", 1usize), ("parallel", 0)] {
        let cfg = config(workers);
        group.bench_function(name, |b| {
            b.iter(|| batch(3, black_box(12), &Constraints::default(), &cfg, &|_, _| {}).expect("batch runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, reductions);
criterion_main!(benches);
