use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hadamat::{canonical_form, check_finite, rank_one_decompose, spectral_decompose};
use hadamat_bench::{gf, idempotent_instance, positive_instance, rational};

fn bench_check_finite(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_finite");
    for n in [8usize, 16, 32] {
        let over_q = positive_instance(&rational(), n, 1);
        group.bench_function(format!("rational/n{n}"), |b| {
            b.iter(|| check_finite(black_box(&over_q)).unwrap())
        });
        let over_gf = positive_instance(&gf(101), n, 1);
        group.bench_function(format!("gf101/n{n}"), |b| {
            b.iter(|| check_finite(black_box(&over_gf)).unwrap())
        });
    }
    group.finish();
}

fn bench_spectral_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_decompose");
    for n in [8usize, 16] {
        let a = positive_instance(&rational(), n, 2);
        group.bench_function(format!("rational/n{n}"), |b| {
            b.iter(|| spectral_decompose(black_box(&a)).unwrap())
        });
    }
    group.finish();
}

fn bench_canonical_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_form");
    for n in [8usize, 16, 32] {
        let e = idempotent_instance(&rational(), n, 3);
        group.bench_function(format!("rational/n{n}"), |b| {
            b.iter(|| canonical_form(black_box(&e)).unwrap())
        });
    }
    group.finish();
}

fn bench_rank_one(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_one_decompose");
    for n in [8usize, 16] {
        let a = positive_instance(&gf(101), n, 4);
        group.bench_function(format!("gf101/n{n}"), |b| {
            b.iter(|| rank_one_decompose(black_box(&a)).unwrap())
        });
    }
    group.finish();
}

fn bench_minimal_polynomial(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal_polynomial");
    for n in [8usize, 16] {
        let a = positive_instance(&rational(), n, 5);
        group.bench_function(format!("rational/n{n}"), |b| {
            b.iter(|| black_box(&a).minimal_polynomial().unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_check_finite,
    bench_spectral_decompose,
    bench_canonical_form,
    bench_rank_one,
    bench_minimal_polynomial
);
criterion_main!(benches);
