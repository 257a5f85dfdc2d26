use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use msrlab::invariant_dim;
use msrlab_bench::{dense_matrix, family, fixing_all};

fn rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    for n in [16, 64, 128] {
        let m = dense_matrix(7, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| black_box(m).rref()));
    }
    group.finish();
}

fn invariant(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariant_dim");
    for (r, m) in [(2, 2), (2, 3), (3, 2)] {
        let f = family(r, m, 5);
        let cs = fixing_all(&f);
        group.bench_function(BenchmarkId::from_parameter(format!("r{r}_m{m}")), |b| {
            b.iter(|| invariant_dim(f.field(), f.ell(), black_box(&cs)).unwrap())
        });
    }
    group.finish();
}

fn construct_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_verify");
    for (r, m) in [(2, 3), (3, 2), (2, 4)] {
        group.bench_function(BenchmarkId::from_parameter(format!("r{r}_m{m}")), |b| {
            b.iter(|| family(black_box(r), m, 5).verify().unwrap().passed)
        });
    }
    group.finish();
}

criterion_group!(benches, rref, invariant, construct_verify);
criterion_main!(benches);
