use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rauzy_core::frame::Frame;
use rauzy_core::layers::AncestorCheck;
use rauzy_core::layers_a::{boundary_a, build_layers_a};
use rauzy_core::layers_b::{build_layers_b, TrimRule};
use rauzy_core::selfrep::tiling_check;
use rauzy_core::{Strategy, Word};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn bench_layers_a(c: &mut Criterion) {
    let mut group = c.benchmark_group("layers_a");
    for level in [4, 5] {
        for (name, s) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, level), &level, |b, &level| {
                b.iter(|| build_layers_a(level, s))
            });
        }
    }
    group.finish();
}

fn bench_layers_b(c: &mut Criterion) {
    let mut group = c.benchmark_group("layers_b");
    group.sample_size(10);
    for level in [3, 4] {
        for (name, s) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, level), &level, |b, &level| {
                b.iter(|| build_layers_b(level, s))
            });
        }
    }
    group.finish();
}

fn bench_boundary(c: &mut Criterion) {
    let frame = Frame::rauzy();
    let mut group = c.benchmark_group("boundary_a");
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, 6), |b| {
            b.iter(|| boundary_a(6, &frame, AncestorCheck::Grandparent, s).unwrap())
        });
    }
    group.finish();
}

fn bench_tiling(c: &mut Criterion) {
    let word = Word::parse("0120", 3).unwrap();
    let mut group = c.benchmark_group("tiling_check");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, 4), |b| {
            b.iter(|| tiling_check(&word, TrimRule::Plain, 4, 1, s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_layers_a, bench_layers_b, bench_boundary, bench_tiling);
criterion_main!(benches);
