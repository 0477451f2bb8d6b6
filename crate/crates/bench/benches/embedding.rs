use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use univmetric::embed::default_depth;
use univmetric::{certify, embed_space, generate, params, Rational, SpaceKind};

fn bench_embed(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed_space");
    group.sample_size(20);
    for p in [3usize, 6, 10] {
        let x = generate(SpaceKind::RandomShortestPath, p, 1);
        let depth = default_depth(&params(&x).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(p), &x, |b, x| b.iter(|| embed_space(x, depth).unwrap()));
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let tol = Rational::frac(1, 1_000_000_000);
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for p in [3usize, 6] {
        let x = generate(SpaceKind::RandomEuclidean, p, 2);
        let result = embed_space(&x, default_depth(&params(&x).unwrap())).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &result, |b, r| b.iter(|| certify(&x, r, &tol).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_embed, bench_certify);
criterion_main!(benches);
