use criterion::{criterion_group, criterion_main, Criterion};
use msd_bench::{code, map, PROTOCOL_CODES};
use msd_core::dynamics::{depolarized_t, find_fixed_point, threshold, FixedPointOptions, ThresholdOptions};
use msd_core::{DistillationMap, System};
use std::hint::black_box;

fn build(c: &mut Criterion) {
    for name in PROTOCOL_CODES {
        let code = code(name);
        c.bench_function(&format!("build/{name}"), |b| b.iter(|| DistillationMap::build(black_box(&code)).unwrap()));
    }
}

fn evaluate(c: &mut Criterion) {
    for name in PROTOCOL_CODES {
        let m = map(name);
        let r = depolarized_t(0.05);
        c.bench_function(&format!("evaluate/{name}"), |b| b.iter(|| m.evaluate(black_box(r), 0.97).unwrap()));
        let sys = System::new(&m, 0.97);
        c.bench_function(&format!("jacobian/{name}"), |b| b.iter(|| sys.jacobian(black_box(r)).unwrap()));
    }
}

fn analyses(c: &mut Criterion) {
    let m = map("15-1-3-canonical");
    let sys = System::new(&m, 3f64.tanh());
    c.bench_function("fixed-point/15-1-3-canonical", |b| {
        b.iter(|| find_fixed_point(&sys, depolarized_t(0.1), &FixedPointOptions::default()).unwrap())
    });
    let mut group = c.benchmark_group("threshold");
    group.sample_size(10);
    group.bench_function("15-1-3-canonical", |b| b.iter(|| threshold(&m, &ThresholdOptions::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, build, evaluate, analyses);
criterion_main!(benches);
