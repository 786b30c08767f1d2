use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use quatseq_bench::instances;
use quatseq_core::closed_form::predict_acf_s;
use quatseq_core::correlation::cross_correlation_serial;
use quatseq_core::sequences::build_s;
use quatseq_core::{autocorrelation, build_class_table, difference_count, DifferenceKind};

fn acf(c: &mut Criterion) {
    let mut group = c.benchmark_group("acf_s");
    group.sample_size(20);
    for params in instances() {
        let s = build_s(&params);
        let id = format!("p{}m{}", params.p(), params.m());
        group.bench_with_input(BenchmarkId::new("parallel", &id), &s, |b, s| {
            b.iter(|| autocorrelation(black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", &id), &s, |b, s| {
            b.iter(|| cross_correlation_serial(black_box(s), black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("closed_form", &id), &params, |b, p| {
            b.iter(|| {
                (0..p.period())
                    .map(|t| predict_acf_s(t, p))
                    .collect::<Vec<_>>()
            })
        });
    }
    group.finish();
}

fn differences(c: &mut Criterion) {
    let mut group = c.benchmark_group("difference_count");
    for params in instances() {
        let table = build_class_table(&params).unwrap();
        let id = format!("p{}m{}", params.p(), params.m());
        group.bench_with_input(BenchmarkId::new("uv_sweep", &id), &table, |b, t| {
            b.iter(|| {
                (1..=params.q())
                    .map(|k| difference_count(DifferenceKind::UV, k, t))
                    .sum::<u64>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, acf, differences);
criterion_main!(benches);
