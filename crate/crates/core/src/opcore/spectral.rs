// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;

use super::operator::{CMatrix, CVector, Operator, C64, HERMITIAN_TOL};
use crate::error::Result;

/// Eigenvalues closer than this (relative to the operator scale) are merged
/// into one eigenspace.
pub const DEGENERACY_RTOL: f64 = 1e-9;

/// Spectral decomposition `A = Σ_j λ_j P_j` with distinct eigenvalues in
/// ascending order and one orthogonal projector per eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<Operator>,
    /// Orthonormal eigenvectors spanning each eigenspace.
    pub eigenvectors: Vec<Vec<CVector>>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ_j λ_j P_j`
    pub fn reconstruct(&self) -> Operator {
        let mut acc = Operator::zeros(self.projectors[0].space());
        for (lambda, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc = &acc + &p.scaled_real(*lambda);
        }
        acc
    }

    /// Largest gap `max_{n≠m} |λ_n − λ_m|` (zero for a single eigenvalue).
    pub fn spread(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    /// Weights `⟨ψ|P_j|ψ⟩` of a normalized vector across the eigenspaces.
    pub fn weights(&self, psi: &CVector) -> Vec<f64> {
        self.projectors
            .iter()
            .map(|p| psi.dotc(&(p.matrix() * psi)).re)
            .collect()
    }
}

/// Spectral decomposition of a Hermitian operator.
///
/// Eigenvalues are returned in ascending order; eigenvalues whose gap is below
/// `DEGENERACY_RTOL · max(1, ‖A‖)` share a single projector.
pub fn herm_eig(op: &Operator) -> Result<SpectralDecomposition> {
    op.ensure_hermitian(HERMITIAN_TOL * op.max_abs().max(1.0))?;
    let n = op.dim();
    let eig = SymmetricEigen::new(op.hermitian_part().into_matrix());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = DEGENERACY_RTOL * scale;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        let lambda = eig.eigenvalues[k];
        match groups.last_mut() {
            Some(g) if (lambda - eig.eigenvalues[*g.last().unwrap()]).abs() <= tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    let mut eigenvectors = Vec::with_capacity(groups.len());
    for g in groups {
        let mean = g.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / g.len() as f64;
        let vecs: Vec<CVector> = g
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect();
        let mut p = CMatrix::zeros(n, n);
        for v in &vecs {
            p += v * v.adjoint();
        }
        eigenvalues.push(mean);
        projectors.push(Operator::new(op.space().clone(), p)?);
        eigenvectors.push(vecs);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
        eigenvectors,
    })
}

/// Applies a real function to a Hermitian operator through its spectrum.
pub fn herm_function(op: &Operator, f: impl Fn(f64) -> C64) -> Result<Operator> {
    let spec = herm_eig(op)?;
    let mut acc = Operator::zeros(op.space());
    for (lambda, p) in spec.eigenvalues.iter().zip(&spec.projectors) {
        acc = &acc + &p.scaled(f(*lambda));
    }
    Ok(acc)
}
