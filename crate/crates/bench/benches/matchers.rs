use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ddm_bench::{pool, workload};
use ddm_core::{
    match_brute_force, match_grid, match_interval_tree, match_sbm_parallel, match_sbm_seq,
    ReportMode, DEFAULT_SPACE_LENGTH,
};

// All matchers head to head at a size brute force can still handle.
fn all_matchers(c: &mut Criterion) {
    let (subs, upds) = workload(10_000, 1.0, 42);
    let mode = ReportMode::Count;
    let mut group = c.benchmark_group("matchers/n10k-alpha1");
    group.sample_size(20);
    group.bench_function("bf", |b| {
        b.iter(|| black_box(match_brute_force(&subs, &upds, mode, 1).unwrap()))
    });
    group.bench_function("grid64", |b| {
        b.iter(|| black_box(match_grid(&subs, &upds, 64, DEFAULT_SPACE_LENGTH, mode).unwrap()))
    });
    group.bench_function("itm", |b| {
        b.iter(|| black_box(match_interval_tree(&subs, &upds, mode, 1).unwrap()))
    });
    group.bench_function("sbm", |b| {
        b.iter(|| black_box(match_sbm_seq(&subs, &upds, mode).unwrap()))
    });
    group.bench_function("sbm-par2", |b| {
        let pool = pool(2);
        b.iter(|| pool.install(|| black_box(match_sbm_parallel(&subs, &upds, 2, mode).unwrap())))
    });
    group.finish();
}

// Sweep matchers at a size where the quadratic baseline is out of reach.
fn sweep_matchers_large(c: &mut Criterion) {
    let (subs, upds) = workload(400_000, 100.0, 7);
    let mode = ReportMode::Count;
    let mut group = c.benchmark_group("sweep/n400k-alpha100");
    group.sample_size(10);
    group.bench_function("itm", |b| {
        b.iter(|| black_box(match_interval_tree(&subs, &upds, mode, 1).unwrap()))
    });
    group.bench_function("sbm", |b| {
        b.iter(|| black_box(match_sbm_seq(&subs, &upds, mode).unwrap()))
    });
    for threads in [1usize, 2, 4] {
        group.bench_with_input(
            BenchmarkId::new("sbm-par", threads),
            &threads,
            |b, &threads| {
                let pool = pool(threads);
                b.iter(|| {
                    pool.install(|| {
                        black_box(match_sbm_parallel(&subs, &upds, threads, mode).unwrap())
                    })
                })
            },
        );
    }
    group.finish();
}

// Output sensitivity: the interval tree visits every match, the sweep
// matchers count without iterating.
fn alpha_sensitivity(c: &mut Criterion) {
    let mode = ReportMode::Count;
    let mut group = c.benchmark_group("alpha-sensitivity/n100k");
    group.sample_size(10);
    for alpha in [0.01, 100.0] {
        let (subs, upds) = workload(100_000, alpha, 3);
        group.bench_with_input(BenchmarkId::new("itm", alpha), &alpha, |b, _| {
            b.iter(|| black_box(match_interval_tree(&subs, &upds, mode, 1).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("sbm", alpha), &alpha, |b, _| {
            b.iter(|| black_box(match_sbm_seq(&subs, &upds, mode).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, all_matchers, sweep_matchers_large, alpha_sensitivity);
criterion_main!(benches);
