// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use emdyn_core::circuit::elimination_scan;
use emdyn_core::control::lie_closure;
use emdyn_core::liouville::{build_full_generator, propagate};
use emdyn_core::opcore::pauli::{sigma_x, sigma_z};
use emdyn_core::random::{random_hermitian, seeded_rng};
use emdyn_core::{expm, CVector, DensityMatrix, DissipativeCoupling, HilbertSpace, C64};

fn plus() -> DensityMatrix {
    let v = CVector::from_element(2, C64::new(FRAC_1_SQRT_2, 0.0));
    DensityMatrix::pure(&HilbertSpace::single(2), &v).unwrap()
}

fn bench_expm(c: &mut Criterion) {
    let mut group = c.benchmark_group("expm");
    let mut rng = seeded_rng(3);
    for d in [4usize, 16, 64] {
        let h = random_hermitian(d, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(d), &h, |b, h| {
            b.iter(|| expm(h, C64::new(0.0, -1.0)))
        });
    }
    group.finish();
}

fn bench_propagate(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagate");
    let mut rng = seeded_rng(4);
    for d2 in [2usize, 4, 8] {
        let b = random_hermitian(d2, &mut rng);
        let coupling = DissipativeCoupling::new(sigma_z(), b, 50.0, 1.0, FRAC_PI_2, 0.5).unwrap();
        let gen = build_full_generator(&coupling, true);
        let rho2 = DensityMatrix::maximally_mixed(coupling.s2_space());
        let rho0 = plus().tensor(&rho2);
        group.bench_with_input(BenchmarkId::from_parameter(2 * d2), &rho0, |b, rho0| {
            b.iter(|| propagate(&gen, rho0, 1.0).unwrap())
        });
    }
    group.finish();
}

fn bench_lie_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("lie_closure");
    let mut rng = seeded_rng(5);
    for d in [3usize, 4, 6] {
        let pair = [random_hermitian(d, &mut rng), random_hermitian(d, &mut rng)];
        group.bench_with_input(BenchmarkId::from_parameter(d), &pair, |b, pair| {
            b.iter(|| lie_closure(pair).unwrap().dimension())
        });
    }
    group.finish();
}

fn bench_elimination(c: &mut Criterion) {
    let rho0 = plus().tensor(&plus());
    let mut group = c.benchmark_group("elimination");
    group.sample_size(10);
    for n_max in [4usize, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n_max), &n_max, |b, &n| {
            b.iter(|| {
                elimination_scan(
                    &sigma_z(),
                    &sigma_x(),
                    1.0,
                    0.8,
                    0.0,
                    1.3,
                    n,
                    &rho0,
                    0.5,
                    &[80.0],
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_expm,
    bench_propagate,
    bench_lie_closure,
    bench_elimination
);
criterion_main!(benches);
