use std::hint::black_box;

use accum_bench::{parabola_points, pattern_matrix};
use accum_core::constructors::{generic_vectors, odd_space};
use accum_core::engine::profile_with_cap;
use accum_core::geometry::best_pair_direction;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("profile");
    g.sample_size(10);
    for (rows, cols) in [(2, 8), (3, 8), (3, 10), (4, 10)] {
        let m = pattern_matrix(rows, cols);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{rows}x{cols}")), &m, |b, m| {
            b.iter(|| profile_with_cap(black_box(m), 12).unwrap())
        });
    }
    let odd = odd_space(2).unwrap();
    g.bench_function("odd-2", |b| b.iter(|| profile_with_cap(black_box(&odd), 12).unwrap()));
    g.finish();
}

fn constructors(c: &mut Criterion) {
    let mut g = c.benchmark_group("generic_vectors");
    g.sample_size(10);
    for (n, d) in [(2, 1), (3, 2), (4, 2)] {
        g.bench_function(format!("n{n}-d{d}"), |b| b.iter(|| generic_vectors(black_box(n), black_box(d)).unwrap()));
    }
    g.finish();
}

fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("best_pair_direction");
    for m in [5, 9, 17] {
        let p = parabola_points(m, 19);
        g.bench_with_input(BenchmarkId::from_parameter(m), &p, |b, p| b.iter(|| best_pair_direction(black_box(p)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, profiles, constructors, geometry);
criterion_main!(benches);
