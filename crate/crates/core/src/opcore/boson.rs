// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated bosonic mode operators on the Fock states `|0⟩ … |n_max⟩`.

use super::operator::{CMatrix, Operator, C64};

/// Annihilation operator `a`, `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(n_max: usize) -> Operator {
    let d = n_max + 1;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::from_matrix(m).expect("square")
}

pub fn creation(n_max: usize) -> Operator {
    annihilation(n_max).dagger()
}

pub fn number(n_max: usize) -> Operator {
    let a = annihilation(n_max);
    &a.dagger() * &a
}

/// Quadrature `X_φ = a e^{−iφ} + a† e^{iφ}`.
pub fn quadrature(n_max: usize, phi: f64) -> Operator {
    let a = annihilation(n_max);
    let phase = C64::from_polar(1.0, -phi);
    &a.scaled(phase) + &a.dagger().scaled(phase.conj())
}

/// Fock basis vector `|n⟩`.
pub fn fock(n_max: usize, n: usize) -> nalgebra::DVector<C64> {
    assert!(n <= n_max, "Fock index beyond truncation");
    let mut v = nalgebra::DVector::zeros(n_max + 1);
    v[n] = C64::new(1.0, 0.0);
    v
}
