use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fusionframe_bench::{frame, system, tf_config, tol};
use fusionframe_core::random::{gaussian_vector, seeded};
use fusionframe_core::tf::composite_signal;
use fusionframe_core::{canonical_dual, frame_algorithm, reconstruct_exact, FusionFrame, StopRule};

fn frame_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_operator");
    for l in [8, 32, 96] {
        let v = frame(l, 6, 1);
        let parts: Vec<_> = (0..v.len()).map(|i| v.subspace(i).clone()).collect();
        let weights = v.weights();
        group.bench_with_input(BenchmarkId::from_parameter(l), &l, |b, _| {
            b.iter(|| FusionFrame::from_parts(black_box(parts.clone()), &weights).unwrap())
        });
    }
    group.finish();
}

fn duals(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_dual");
    for l in [8, 32, 96] {
        let v = frame(l, 6, 2);
        group.bench_with_input(BenchmarkId::from_parameter(l), &v, |b, v| {
            b.iter(|| canonical_dual(black_box(v), None).unwrap())
        });
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let v = frame(32, 6, 3);
    let f = gaussian_vector::<f64, _>(&mut seeded(4), 32);
    c.bench_function("reconstruct_exact/32", |b| {
        b.iter(|| reconstruct_exact(&v, black_box(&f)).unwrap())
    });
    let stop = StopRule {
        target_eps: 1e-8,
        max_iter: 10_000,
        keep_iterates: false,
    };
    c.bench_function("frame_algorithm/32", |b| {
        b.iter(|| frame_algorithm(&v, black_box(&f), v.bounds(), stop).unwrap())
    });
}

fn local_operator(c: &mut Criterion) {
    let sys = system(32, 6, 5);
    c.bench_function("fusion_operator_via_locals/32", |b| {
        b.iter(|| black_box(&sys).fusion_operator_via_locals().unwrap())
    });
}

fn tf_pipeline(c: &mut Criterion) {
    let cfg = tf_config();
    let mut group = c.benchmark_group("tf");
    group.sample_size(10);
    group.bench_function("build/384", |b| b.iter(|| black_box(&cfg).build(None, tol()).unwrap()));
    let sys = cfg.build(None, tol()).unwrap();
    let f = composite_signal(cfg.len, cfg.seed);
    group.bench_function("reconstruct/384", |b| {
        b.iter(|| reconstruct_exact(sys.system.frame(), black_box(&f)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, frame_operator, duals, reconstruction, local_operator, tf_pipeline);
criterion_main!(benches);
