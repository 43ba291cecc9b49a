use adic_core::certifier::certify_theorem_1_1;
use adic_core::corpus::instances;
use adic_core::towers::{limits_closed_form, limits_truncated, Tower};
use adic_core::{smith_normal_form, ExactMatrix, Ring};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> ExactMatrix {
    let v: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-bound..=bound)).collect();
    let rows: Vec<&[i64]> = v.chunks(n).collect();
    ExactMatrix::from_i64_rows(Ring::Integers, &rows)
}

fn snf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("snf");
    for n in [2, 4, 6, 8] {
        let a = random_matrix(&mut rng, n, 1000);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| smith_normal_form(black_box(a))));
    }
    group.finish();
}

fn certify(c: &mut Criterion) {
    let corpus = instances(20, 7);
    c.bench_function("certify/20 instances", |b| {
        b.iter(|| {
            for (i, inst) in corpus.iter().enumerate() {
                let _ = black_box(certify_theorem_1_1(&inst.module, &inst.ideal, &inst.system, 5, i as u64));
            }
        })
    });
}

fn towers(c: &mut Criterion) {
    let corpus = instances(20, 11);
    let towers: Vec<Tower> =
        corpus.iter().filter_map(|inst| Tower::multiplication(&inst.module, &inst.system.generator()).ok()).collect();
    c.bench_function("towers/closed form", |b| {
        b.iter(|| towers.iter().filter(|t| limits_closed_form(t).is_ok()).count())
    });
    c.bench_function("towers/depth-8 oracle", |b| {
        b.iter(|| towers.iter().filter(|t| limits_truncated(t, 8).is_ok()).count())
    });
}

criterion_group!(benches, snf, certify, towers);
criterion_main!(benches);
