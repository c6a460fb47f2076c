// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Superoperators acting on row-vectorized density matrices.
//!
//! Row vectorization stacks the rows of ρ: `vec(ρ)[i·d + j] = ρ[i, j]`. Under
//! this convention `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`.

use std::ops::{Add, Sub};

use super::density::DensityMatrix;
use super::expm::LinearMap;
use super::operator::{CMatrix, CVector, Operator, C64, I};
use super::space::HilbertSpace;
use crate::error::{Error, Result};

/// Dense `d² × d²` matrix acting on row-vectorized operators of `space`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    space: HilbertSpace,
    matrix: CMatrix,
}

pub fn vectorize(m: &CMatrix) -> CVector {
    let (r, c) = m.shape();
    CVector::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn devectorize(v: &CVector, d: usize) -> CMatrix {
    assert_eq!(v.len(), d * d, "vector length is not d²");
    CMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

impl SuperOperator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d2 = space.total_dim().pow(2);
        if matrix.nrows() != d2 || matrix.ncols() != d2 {
            return Err(Error::DimMismatch {
                expected: d2,
                found: matrix.nrows(),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d2 = space.total_dim().pow(2);
        Self {
            space: space.clone(),
            matrix: CMatrix::zeros(d2, d2),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `d²`
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `ρ ↦ A ρ B`
    pub fn sandwich(left: &Operator, right: &Operator) -> Self {
        assert_eq!(
            left.space(),
            right.space(),
            "operators act on different spaces"
        );
        Self {
            space: left.space().clone(),
            matrix: left.matrix().kronecker(&right.matrix().transpose()),
        }
    }

    /// `ρ ↦ A ρ`
    pub fn left(op: &Operator) -> Self {
        Self::sandwich(op, &Operator::identity(op.space()))
    }

    /// `ρ ↦ ρ A`
    pub fn right(op: &Operator) -> Self {
        Self::sandwich(&Operator::identity(op.space()), op)
    }

    /// `ρ ↦ −i[H, ρ]`
    pub fn hamiltonian(h: &Operator) -> Self {
        (&Self::left(h) - &Self::right(h)).scaled(-I)
    }

    /// `ρ ↦ {A, ρ}`
    pub fn anticommutator(a: &Operator) -> Self {
        &Self::left(a) + &Self::right(a)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * factor,
        }
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        self.scaled(C64::new(factor, 0.0))
    }

    /// Applies the superoperator to an operator matrix.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let d = self.space.total_dim();
        devectorize(&(&self.matrix * vectorize(m)), d)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> CMatrix {
        self.apply_matrix(rho.matrix())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    fn assert_same_space(&self, other: &SuperOperator) {
        assert_eq!(
            self.space, other.space,
            "superoperators act on different spaces"
        );
    }
}

impl Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, rhs: &SuperOperator) -> SuperOperator {
        self.assert_same_space(rhs);
        SuperOperator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &SuperOperator {
    type Output = SuperOperator;
    fn sub(self, rhs: &SuperOperator) -> SuperOperator {
        self.assert_same_space(rhs);
        SuperOperator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl LinearMap for SuperOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply_into(&self, x: &CVector, y: &mut CVector) {
        LinearMap::apply_into(&self.matrix, x, y)
    }

    fn norm1_bound(&self) -> f64 {
        LinearMap::norm1_bound(&self.matrix)
    }
}

/// Lindblad dissipator `𝒟[L](ρ) = LρL† − ½(L†Lρ + ρL†L)` as a superoperator.
pub fn dissipator_superop(l: &Operator) -> SuperOperator {
    let ldl = &l.dagger() * l;
    let jump = SuperOperator::sandwich(l, &l.dagger());
    &jump - &SuperOperator::anticommutator(&ldl).scaled_real(0.5)
}

/// Direct matrix-form evaluation of `𝒟[L](ρ)`.
pub fn apply_dissipator(l: &CMatrix, rho: &CMatrix) -> CMatrix {
    let ld = l.adjoint();
    let ldl = &ld * l;
    l * rho * &ld - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::pauli::{identity2, sigma_z};
    use crate::random::{random_density, random_operator, seeded_rng};
    use proptest::prelude::*;

    #[test]
    fn vectorization_is_row_major() {
        let m = CMatrix::from_fn(2, 2, |i, j| C64::new((2 * i + j) as f64, 0.0));
        let v = vectorize(&m);
        assert_eq!(v[1], C64::new(1.0, 0.0));
        assert_eq!(v[2], C64::new(2.0, 0.0));
        assert_eq!(devectorize(&v, 2), m);
    }

    #[test]
    fn identity_jump_gives_zero() {
        let d = dissipator_superop(&identity2());
        assert!(d.max_abs() < 1e-15);
    }

    #[test]
    fn dephasing_fixes_diagonal_states() {
        let d = dissipator_superop(&sigma_z());
        let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(0.3, 0.0),
            C64::new(0.7, 0.0),
        ]));
        assert!(d.apply_matrix(&diag).camax() < 1e-15);
    }

    #[test]
    fn random_jump_matches_direct_evaluation() {
        let mut rng = seeded_rng(21);
        let space = HilbertSpace::new(vec![2, 3]).unwrap();
        for _ in 0..10 {
            let l = random_operator(&space, &mut rng);
            let rho = random_density(&space, &mut rng);
            let super_form = dissipator_superop(&l).apply(&rho);
            let direct = apply_dissipator(l.matrix(), rho.matrix());
            assert!((super_form - direct).camax() < 1e-12);
        }
    }

    #[test]
    fn sandwich_convention() {
        let mut rng = seeded_rng(22);
        let s = HilbertSpace::single(3);
        let a = random_operator(&s, &mut rng);
        let b = random_operator(&s, &mut rng);
        let rho = random_density(&s, &mut rng);
        let lhs = SuperOperator::sandwich(&a, &b).apply(&rho);
        let rhs = a.matrix() * rho.matrix() * b.matrix();
        assert!((lhs - rhs).camax() < 1e-13);
    }

    proptest! {
        #[test]
        fn dissipator_increment_is_traceless_and_hermitian(seed in 0u64..10_000) {
            let mut rng = seeded_rng(seed);
            let space = HilbertSpace::new(vec![2, 2]).unwrap();
            let l = random_operator(&space, &mut rng);
            let rho = random_density(&space, &mut rng);
            let inc = dissipator_superop(&l).apply(&rho);
            let scale = l.max_abs().powi(2).max(1.0);
            prop_assert!(inc.trace().norm() < 1e-12 * scale);
            prop_assert!((&inc - inc.adjoint()).camax() < 1e-12 * scale);
        }
    }
}
