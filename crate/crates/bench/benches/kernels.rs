use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qihe_core::coding::{
    holevo_chi, refactorization_ledger, typical_subspace_by_types, typical_subspace_dense, Alphabet,
};
use qihe_core::protocols::{ghz_unlock, parity_no_information_check, random_parity_channel};
use qihe_core::thermo::ThermalContext;
use qihe_core::{partial_trace, von_neumann_entropy, DensityMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qcore(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("qcore");
    for n in [4usize, 6, 8] {
        let rho = DensityMatrix::random(&vec![2; n], &mut rng).unwrap();
        group.bench_with_input(
            BenchmarkId::new("partial_trace_keep_half", n),
            &rho,
            |b, rho| {
                let keep: Vec<usize> = (0..n / 2).collect();
                b.iter(|| partial_trace(black_box(rho), &keep).unwrap())
            },
        );
        group.bench_with_input(BenchmarkId::new("entropy", n), &rho, |b, rho| {
            b.iter(|| von_neumann_entropy(black_box(rho)).unwrap())
        });
    }
    group.finish();
}

fn protocols(c: &mut Criterion) {
    let ctx = ThermalContext::natural();
    let mut group = c.benchmark_group("protocols");
    for n in [4usize, 8] {
        group.bench_with_input(BenchmarkId::new("ghz_unlock", n), &n, |b, &n| {
            b.iter(|| ghz_unlock(n, 0, &ctx).unwrap())
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [3usize, 5] {
        let ch = random_parity_channel(n, 3, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("parity_check", n), &ch, |b, ch| {
            b.iter(|| parity_no_information_check(n, ch).unwrap())
        });
    }
    group.finish();
}

fn coding(c: &mut Criterion) {
    let rho = DensityMatrix::diagonal(&[2], &[0.9, 0.1]).unwrap();
    let mut group = c.benchmark_group("coding");
    group.bench_function("typical_dense_L8", |b| {
        b.iter(|| typical_subspace_dense(&rho, 8, 0.2).unwrap())
    });
    for l in [100usize, 10_000, 1_000_000] {
        group.bench_with_input(BenchmarkId::new("typical_types", l), &l, |b, &l| {
            b.iter(|| typical_subspace_by_types(&rho, l, 0.2).unwrap())
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let letters = (0..4)
        .map(|_| DensityMatrix::random(&[4], &mut rng).unwrap())
        .collect();
    let a = Alphabet::new(letters, vec![0.25; 4]).unwrap();
    group.bench_function("holevo_d4_n4", |b| {
        b.iter(|| holevo_chi(black_box(&a)).unwrap())
    });
    let ctx = ThermalContext::natural();
    group.bench_function("refactor_ledger_L100", |b| {
        b.iter(|| refactorization_ledger(&a, 100, 0.1, &ctx).unwrap())
    });
    group.finish();
}

criterion_group!(benches, qcore, protocols, coding);
criterion_main!(benches);
