use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tropbetti_bench::random_matrix;

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("gf2_rank");
    for n in [256, 1024, 2048] {
        let m = random_matrix(n, n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.rank())
        });
    }
    group.finish();
}

criterion_group!(benches, rank);
criterion_main!(benches);
