use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use evo_core::corpus::run_corpus;
use evo_core::field::Field;
use evo_core::generators::{random_algebra, AlgebraKind};
use evo_core::par;

fn corpus(dim: usize, count: u64) -> Vec<evo_core::Algebra> {
    let f4 = Field::new(2, None).unwrap();
    (0..count)
        .map(|seed| {
            let field = if seed % 2 == 0 { Field::F2 } else { f4 };
            random_algebra(field, dim, seed, AlgebraKind::Evolution).unwrap()
        })
        .collect()
}

fn profiles(c: &mut Criterion) {
    let mut group = c.benchmark_group("profiles");
    for dim in [4usize, 6] {
        let algebras = corpus(dim, 64);
        group.bench_with_input(BenchmarkId::new("sequential", dim), &algebras, |b, a| {
            b.iter(|| par::profiles_checked(a, false))
        });
        group.bench_with_input(BenchmarkId::new("parallel", dim), &algebras, |b, a| {
            b.iter(|| par::profiles_checked(a, true))
        });
    }
    group.finish();
}

fn paper_corpus(c: &mut Criterion) {
    c.bench_function("verify_paper", |b| b.iter(run_corpus));
}

criterion_group!(benches, profiles, paper_corpus);
criterion_main!(benches);
