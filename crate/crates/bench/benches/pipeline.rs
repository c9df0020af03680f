use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use twistmod::verify::default_samples;
use twistmod::{build_twisted_structure, check_twisted, lift_root, twist_classify};
use twistmod_bench::{case_minus1_module, dds_module, hyperelliptic, poly, sqrt_problem};

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_module");
    for n in [2, 4, 8] {
        g.bench_with_input(BenchmarkId::new("s^2 d/ds", n), &n, |b, &n| {
            b.iter(|| case_minus1_module(black_box(n), 32))
        });
    }
    g.finish();
}

fn lift(c: &mut Criterion) {
    let mut g = c.benchmark_group("lift_root");
    for n in [2, 4] {
        let prob = sqrt_problem(&dds_module(n, 32), &poly("s^3+1"));
        g.bench_with_input(BenchmarkId::new("Z^2-(s^3+1)", n), &prob, |b, p| {
            b.iter(|| lift_root(black_box(p), Some(24)).unwrap())
        });
    }
    g.finish();
}

fn twist(c: &mut Criterion) {
    let ext = hyperelliptic();
    let m = case_minus1_module(3, 16);
    c.bench_function("twist_classify", |b| {
        b.iter(|| twist_classify(black_box(&ext), &m).unwrap())
    });
    c.bench_function("build_twisted_structure", |b| {
        b.iter(|| build_twisted_structure(black_box(&ext), &m, None).unwrap())
    });
    let ts = build_twisted_structure(&ext, &m, None).unwrap();
    let samples = default_samples(&ts);
    c.bench_function("check_twisted", |b| {
        b.iter(|| check_twisted(black_box(&ts), &samples))
    });
}

criterion_group!(benches, build, lift, twist);
criterion_main!(benches);
