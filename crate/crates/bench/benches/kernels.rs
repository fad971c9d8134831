use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ladderlab::quadrature::integrate_zeta_sq;
use ladderlab::special::{hardy_z, ln_gamma};
use ladderlab::{Ladder, LadderConfig};

fn z_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("hardy_z");
    for t in [1e3, 1e4, 1e5, 1e6] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| hardy_z(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn ln_gamma_evaluation(c: &mut Criterion) {
    c.bench_function("ln_gamma(1e5)", |b| b.iter(|| ln_gamma(black_box(1e5)).unwrap()));
}

fn j_segment(c: &mut Criterion) {
    let mut group = c.benchmark_group("zeta_sq_segment_len_10");
    group.sample_size(10);
    for t in [1e3, 1e4, 1e5] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| integrate_zeta_sq(black_box(t), t + 10.0, 1e-8).unwrap())
        });
    }
    group.finish();
}

fn phi1(c: &mut Criterion) {
    let ladder = Ladder::new(LadderConfig::default()).unwrap();
    // warm the checkpoint table so only the remainder and the root solve are timed
    ladder.j(2e4).unwrap();
    let mut group = c.benchmark_group("phi1");
    group.sample_size(10);
    group.bench_function("phi1(1e4 + 0.5)", |b| b.iter(|| ladder.phi1(black_box(1e4 + 0.5)).unwrap()));
    group.bench_function("phi1_inverse(1e4)", |b| {
        b.iter(|| ladder.phi1_inverse(black_box(1e4)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, z_evaluation, ln_gamma_evaluation, j_segment, phi1);
criterion_main!(benches);
