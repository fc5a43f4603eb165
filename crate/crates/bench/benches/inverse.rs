use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqkit_bench::{synthetic, DEFAULT_SIZES};
use eqkit_core::fast_inverse;
use eqkit_core::linalg::generic_inverse;

fn inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse");
    group.sample_size(10);
    for n in DEFAULT_SIZES {
        let s = synthetic(n, 42).expect("valid sweep parameters");
        group.bench_with_input(BenchmarkId::new("fast", n), &s, |b, s| b.iter(|| fast_inverse(black_box(s)).unwrap()));
        group.bench_with_input(BenchmarkId::new("generic", n), &s, |b, s| {
            b.iter(|| generic_inverse(black_box(s.matrix())).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, inverse);
criterion_main!(benches);
