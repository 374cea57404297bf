use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rauzy_bench::diagram;
use rauzy_core::diagram::{DiagramMode, Family, RauzyDiagram};
use rauzy_core::families::{matrix_family, FamilyKind, FamilySpec};
use rauzy_core::linalg::DEFAULT_PRECISION;
use rauzy_core::loops::{enumerate_loops, DEFAULT_LOOP_BUDGET};
use rauzy_core::PerronRoot;

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("diagram");
    for n in [8u32, 10, 12] {
        let base = Family::Hyp.base(n).unwrap();
        group.bench_with_input(BenchmarkId::new("hyp-reduced", n), &base, |b, base| {
            b.iter(|| RauzyDiagram::build(black_box(base), DiagramMode::Reduced).unwrap())
        });
    }
    let base = Family::Marked.base(8).unwrap();
    group.bench_function("marked-labeled/8", |b| {
        b.iter(|| RauzyDiagram::build(black_box(&base), DiagramMode::Labeled).unwrap())
    });
    group.finish();
}

fn loops(c: &mut Criterion) {
    let mut group = c.benchmark_group("loops");
    group.sample_size(20);
    let d = diagram(Family::Marked, 5, DiagramMode::Reduced);
    for len in [6usize, 8, 10] {
        group.bench_with_input(BenchmarkId::new("marked-reduced-5", len), &len, |b, &len| {
            b.iter(|| enumerate_loops(&d, len, DEFAULT_LOOP_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for g in [5u32, 10, 20] {
        let m = matrix_family(FamilySpec::new(FamilyKind::A1, g).unwrap()).unwrap().matrix;
        group.bench_with_input(BenchmarkId::new("charpoly", g), &m, |b, m| b.iter(|| m.charpoly()));
        let chi = m.charpoly();
        group.bench_with_input(BenchmarkId::new("perron-root", g), &chi, |b, chi| {
            b.iter(|| PerronRoot::isolate(chi, DEFAULT_PRECISION).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, build, loops, spectral);
criterion_main!(benches);
