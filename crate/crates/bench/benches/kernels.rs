use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mflab_core::{
    conjecture_matrix, determinant, eisenstein_g, f_coefficients, g_generator_series, theta, GeneratorSpec,
};
use std::hint::black_box;

fn series_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("qseries_mul");
    for prec in [200usize, 800] {
        let g = eisenstein_g(6, 1, 1, prec).unwrap();
        let t = theta(prec);
        group.bench_with_input(BenchmarkId::new("dense", prec), &prec, |b, _| b.iter(|| black_box(g.mul(&g))));
        group.bench_with_input(BenchmarkId::new("theta", prec), &prec, |b, _| b.iter(|| black_box(g.mul(&t))));
    }
    group.finish();
}

fn closed_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("f_coefficients");
    for (d, k, e) in [(1i64, 4u32, 1u32), (13, 10, 5), (-15, 5, 7)] {
        let spec = GeneratorSpec::new(d, k, e).unwrap();
        group.bench_function(BenchmarkId::from_parameter(spec), |b| b.iter(|| black_box(f_coefficients(&spec, 50))));
    }
    group.finish();
}

fn generator_series(c: &mut Criterion) {
    let spec = GeneratorSpec::new(5, 6, 2).unwrap();
    c.bench_function("g_generator_series (D=5, k=6, e=2) prec 500", |b| {
        b.iter(|| black_box(g_generator_series(&spec, 500).unwrap()))
    });
}

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("conjecture_determinant");
    group.sample_size(10);
    for ell in [36u32, 72] {
        let m = conjecture_matrix(1, ell).unwrap();
        group.bench_with_input(BenchmarkId::new("D=1", ell), &m, |b, m| b.iter(|| black_box(determinant(m).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, series_products, closed_forms, generator_series, determinants);
criterion_main!(benches);
