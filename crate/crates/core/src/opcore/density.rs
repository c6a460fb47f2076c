// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;

use super::operator::{CMatrix, CVector, Operator, C64, ONE};
use super::space::HilbertSpace;
use crate::error::{Error, Result};

/// Absolute tolerance on the minimum eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Absolute tolerance on Hermiticity and unit trace.
pub const STATE_TOL: f64 = 1e-9;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all to tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let op = Operator::new(space, matrix)?;
        Self::from_operator(op)
    }

    pub fn from_operator(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = min_eigenvalue(op.matrix());
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        let space = op.space().clone();
        Ok(Self {
            space,
            matrix: op.into_matrix(),
        })
    }

    /// Wraps a matrix without validation. Callers guarantee physicality.
    pub(crate) fn new_unchecked(space: HilbertSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(space.total_dim(), matrix.nrows());
        Self { space, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(space: &HilbertSpace, psi: &CVector) -> Result<Self> {
        if psi.len() != space.total_dim() {
            return Err(Error::DimMismatch {
                expected: space.total_dim(),
                found: psi.len(),
            });
        }
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let psi = psi / C64::new(n, 0.0);
        Ok(Self::new_unchecked(space.clone(), &psi * psi.adjoint()))
    }

    /// Computational basis projector `|k⟩⟨k|`.
    pub fn basis(space: &HilbertSpace, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut m = CMatrix::zeros(d, d);
        m[(index, index)] = ONE;
        Ok(Self::new_unchecked(space.clone(), m))
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self::new_unchecked(
            space.clone(),
            CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0),
        )
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn as_operator(&self) -> Operator {
        Operator::new(self.space.clone(), self.matrix.clone()).expect("consistent shape")
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized `ψ`.
    pub fn fidelity_with_pure(&self, psi: &CVector) -> f64 {
        psi.dotc(&(&self.matrix * psi)).re
    }

    pub fn expectation(&self, op: &Operator) -> C64 {
        (&self.matrix * op.matrix()).trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }

    /// `ρ ⊗ σ`
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::new_unchecked(
            self.space.compose(&other.space),
            self.matrix.kronecker(&other.matrix),
        )
    }

    /// Reduced state on the listed factors (ascending order), tracing out the
    /// rest.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(herm).eigenvalues.min()
}

/// Partial trace of a state, keeping the factors in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = rho.space.normalize_factor_set(keep)?;
    let m = partial_trace_matrix(&rho.matrix, rho.space.factor_dims(), &keep);
    let space = rho.space.subspace(&keep)?;
    Ok(DensityMatrix::new_unchecked(space, m))
}

/// Partial trace of an arbitrary operator matrix with factor dimensions
/// `dims`, keeping the (sorted, valid) factor indices `keep`.
pub(crate) fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let nf = dims.len();
    let traced: Vec<usize> = (0..nf).filter(|k| !keep.contains(k)).collect();
    let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let trace_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; nf];
    for k in (0..nf.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offset = |group: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &k in group.iter().rev() {
            off += (idx % dims[k]) * strides[k];
            idx /= dims[k];
        }
        off
    };
    let keep_off: Vec<usize> = (0..keep_dim).map(|i| offset(keep, i)).collect();
    let trace_off: Vec<usize> = (0..trace_dim).map(|i| offset(&traced, i)).collect();

    let mut out = CMatrix::zeros(keep_dim, keep_dim);
    for (i, &ri) in keep_off.iter().enumerate() {
        for (j, &cj) in keep_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &trace_off {
                acc += m[(ri + t, cj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Partial trace of an operator (not necessarily a state).
pub fn partial_trace_operator(op: &Operator, keep: &[usize]) -> Result<Operator> {
    let keep = op.space().normalize_factor_set(keep)?;
    let m = partial_trace_matrix(op.matrix(), op.space().factor_dims(), &keep);
    Operator::new(op.space().subspace(&keep)?, m)
}

/// Trace distance `½‖a − b‖₁`, computed from singular values.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    trace_distance_matrices(&a.matrix, &b.matrix)
}

pub(crate) fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let diff = a - b;
    Ok(0.5 * diff.singular_values().sum())
}
