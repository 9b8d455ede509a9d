use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use trilat_core::{
    count, count_parallel, decrement_g2, enumerate, lgv_count, reduce, BoundaryCondition,
};

fn sample() -> BoundaryCondition {
    BoundaryCondition::from_strs("10110", "11001", "01011").unwrap()
}

fn enumeration(c: &mut Criterion) {
    let b = sample();
    c.bench_function("count/sample_n5", |bench| {
        bench.iter(|| count(black_box(&b)).unwrap())
    });
    c.bench_function("count_parallel/sample_n5", |bench| {
        bench.iter(|| count_parallel(black_box(&b), 6).unwrap())
    });
    let all4 = BoundaryCondition::all(4);
    c.bench_function("count/every_boundary_n4", |bench| {
        bench.iter(|| all4.iter().map(|b| count(b).unwrap()).sum::<u64>())
    });
}

fn pipelines(c: &mut Criterion) {
    let maps = enumerate(&sample()).unwrap();
    c.bench_function("decrement_g2/sample_n5", |bench| {
        bench.iter(|| {
            maps.iter()
                .map(|m| decrement_g2(m).unwrap().steps)
                .sum::<usize>()
        })
    });
    let flat =
        enumerate(&BoundaryCondition::from_strs("10110", "11001", "00111").unwrap()).unwrap();
    c.bench_function("reduce/g2_zero_n5", |bench| {
        bench.iter(|| {
            flat.iter()
                .map(|m| reduce(m).unwrap().exchanged)
                .sum::<usize>()
        })
    });
    c.bench_function("lgv_count/n12", |bench| {
        bench.iter(|| lgv_count(black_box("010011010110")).unwrap())
    });
}

criterion_group!(benches, enumeration, pipelines);
criterion_main!(benches);
