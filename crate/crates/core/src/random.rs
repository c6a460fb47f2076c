// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random operators and states for randomized suites.
//!
//! All generators draw from ChaCha streams so that a `(seed, stream)` pair
//! fully determines the sample regardless of evaluation order or threading.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::opcore::{CMatrix, CVector, DensityMatrix, HilbertSpace, Operator, C64};

pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`; used to give every task of
/// a parallel suite its own reproducible generator.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Ginibre matrix with standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| gaussian_c64(rng))
}

/// GUE-distributed Hermitian operator on a single factor of dimension `d`.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator {
    random_hermitian_on(&HilbertSpace::single(d), rng)
}

pub fn random_hermitian_on<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> Operator {
    let g = ginibre(space.total_dim(), rng);
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    Operator::new(space.clone(), h).expect("shape matches space")
}

/// Non-Hermitian operator with Gaussian entries.
pub fn random_operator<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> Operator {
    Operator::new(space.clone(), ginibre(space.total_dim(), rng)).expect("shape matches space")
}

/// Haar-random normalized state vector.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian_c64(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Full-rank random state `GG†/tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> DensityMatrix {
    let g = ginibre(space.total_dim(), rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(space.clone(), m).expect("GG† is a valid state")
}
