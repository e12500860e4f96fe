use criterion::{criterion_group, criterion_main, Criterion};
use tropbetti_bench::x_side;

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("cohomology");
    group.sample_size(10);
    for name in ["cube:3", "cube:4/dual", "quintic"] {
        let complex = x_side(name);
        group.bench_function(name, |b| b.iter(|| complex.cohomology_table().unwrap()));
    }
    group.finish();
}

criterion_group!(benches, tables);
criterion_main!(benches);
