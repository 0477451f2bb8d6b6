use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use univmetric::{cell_of_index, curve_point, universal_dist, Rational, RealParam};

fn bench_cell_of_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("cell_of_index");
    for (n, k) in [(2u32, 16u64), (4, 16), (16, 8), (80, 4)] {
        let index = (BigUint::from(1u8) << (n as u64 * k)) / 3u8;
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_k{k}")), &index, |b, i| {
            b.iter(|| cell_of_index(black_box(n), black_box(k), i).unwrap())
        });
    }
    group.finish();
}

fn bench_curve_point(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve_point");
    for n in [2u32, 3, 6] {
        let t = Rational::from_integer(n as i64 - 1) + Rational::frac(1, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| curve_point(black_box(n), t, 20).unwrap())
        });
    }
    group.finish();
}

fn bench_universal_dist(c: &mut Criterion) {
    let tol = Rational::frac(1, 1_000_000);
    let cases = [("same_interval", (Rational::frac(5, 3), Rational::frac(7, 4))), ("chain", (Rational::frac(3, 10), Rational::frac(97, 10)))];
    let mut group = c.benchmark_group("universal_dist");
    for (name, (x, y)) in cases {
        let (x, y) = (RealParam::new(x), RealParam::new(y));
        group.bench_function(name, |b| b.iter(|| universal_dist(black_box(&x), black_box(&y), &tol).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_cell_of_index, bench_curve_point, bench_universal_dist);
criterion_main!(benches);
