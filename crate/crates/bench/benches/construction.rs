use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use extoric::expand::BinaryExpandedPair;
use extoric::lift::lift_pair;
use extoric::toric::{build_skeleton, ExtendedToricCode};
use extoric_bench::LENGTH_1152;

fn lift(c: &mut Criterion) {
    let mut group = c.benchmark_group("lift_pair");
    for n in [4, 8, 12] {
        let (skeleton, _) = build_skeleton(n).unwrap();
        group.bench_with_input(BenchmarkId::new("n", n), &skeleton, |b, s| {
            b.iter(|| black_box(lift_pair(s, 9, 1).unwrap()))
        });
    }
    group.finish();
}

/// Lift plus rank and logical-operator validation.
fn extended_toric(c: &mut Criterion) {
    let mut group = c.benchmark_group("extended_toric_build");
    group.sample_size(10);
    for (n, m) in LENGTH_1152 {
        group.bench_function(BenchmarkId::new(format!("n{n}"), m), |b| {
            b.iter(|| black_box(ExtendedToricCode::build(n, m, 1).unwrap()))
        });
    }
    group.finish();
}

fn expansion(c: &mut Criterion) {
    let code = ExtendedToricCode::build(8, 9, 1).unwrap();
    c.bench_function("binary_expansion_n8_m9", |b| b.iter(|| black_box(BinaryExpandedPair::from_pair(code.pair()))));
}

criterion_group!(benches, lift, extended_toric, expansion);
criterion_main!(benches);
