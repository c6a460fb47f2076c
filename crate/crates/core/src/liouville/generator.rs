// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::DissipativeCoupling;
use crate::error::{Error, Result};
use crate::opcore::density::partial_trace_matrix;
use crate::opcore::superop::apply_dissipator;
use crate::opcore::{dissipator_superop, herm_eig, CMatrix, Operator, SuperOperator, C64};

/// Coefficients of a reduced single-subsystem generator
/// `ρ̇ = −i·drift·[X, ρ] + rate·𝒟[X](ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedGenerator {
    pub drift: f64,
    pub rate: f64,
}

/// `ρ ↦ η e^{iφ} B₂ρA₁ + η e^{−iφ} A₁ρB₂`
fn cross_term(c: &DissipativeCoupling, a1: &Operator, b2: &Operator) -> SuperOperator {
    let phase = C64::from_polar(c.eta(), c.phi());
    &SuperOperator::sandwich(b2, a1).scaled(phase)
        + &SuperOperator::sandwich(a1, b2).scaled(phase.conj())
}

/// Expanded generator
/// `γ𝒟[A₁] + (η²/γ)𝒟[B₂] − 𝒦 + η cos φ {A₁B₂, ·}`, plus `−i[gA₁B₂, ·]` when
/// `include_coherent` is set.
pub fn build_full_generator(c: &DissipativeCoupling, include_coherent: bool) -> SuperOperator {
    let a1 = c.a1();
    let b2 = c.b2();
    let mut gen = &dissipator_superop(&a1).scaled_real(c.gamma())
        + &dissipator_superop(&b2).scaled_real(c.eta() * c.eta() / c.gamma());
    gen = &gen - &cross_term(c, &a1, &b2);
    let anti = c.eta() * c.phi().cos();
    if anti != 0.0 {
        gen = &gen + &SuperOperator::anticommutator(&(&a1 * &b2)).scaled_real(anti);
    }
    if include_coherent && c.g() != 0.0 {
        gen = &gen + &SuperOperator::hamiltonian(&c.coherent_hamiltonian());
    }
    gen
}

/// `𝒟[L]` built directly from the jump operator, plus the coherent part when
/// requested.
pub fn direct_generator(c: &DissipativeCoupling, include_coherent: bool) -> SuperOperator {
    let d = dissipator_superop(&c.jump());
    if include_coherent {
        &d + &SuperOperator::hamiltonian(&c.coherent_hamiltonian())
    } else {
        d
    }
}

/// S2 generator conditioned on the `j`-th distinct eigenvalue of `A`:
/// drift `λ_j (g + η sin φ)` on `[B, ·]` and rate `η²/γ` on `𝒟[B]`.
pub fn reduced_s2_generator(c: &DissipativeCoupling, j: usize) -> Result<ReducedGenerator> {
    let spec = herm_eig(c.a())?;
    let lambda = *spec.eigenvalues.get(j).ok_or(Error::BadEigenindex {
        index: j,
        count: spec.len(),
    })?;
    Ok(ReducedGenerator {
        drift: lambda * c.s2_coefficient(),
        rate: c.eta() * c.eta() / c.gamma(),
    })
}

/// S1 generator conditioned on the `j`-th distinct eigenvalue of `B`:
/// drift `λ_j (g − η sin φ)` on `[A, ·]` and rate `γ` on `𝒟[A]`.
pub fn reduced_s1_generator(c: &DissipativeCoupling, j: usize) -> Result<ReducedGenerator> {
    let spec = herm_eig(c.b())?;
    let lambda = *spec.eigenvalues.get(j).ok_or(Error::BadEigenindex {
        index: j,
        count: spec.len(),
    })?;
    Ok(ReducedGenerator {
        drift: lambda * c.s1_coefficient(),
        rate: c.gamma(),
    })
}

fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

/// Time derivative of the S2 marginal assembled from the reduced form:
/// `−i(g + η sin φ) Σ_j λ_j [B, tr₁((P_j⊗𝟙)ρ)] + (η²/γ)𝒟[B](tr₁ρ)`.
pub fn s2_marginal_rhs(c: &DissipativeCoupling, rho: &CMatrix) -> Result<CMatrix> {
    let space = c.full_space();
    let dims = space.factor_dims();
    let keep = c.s2_factors();
    let spec = herm_eig(c.a())?;
    let id2 = Operator::identity(c.s2_space());
    let mut weighted = CMatrix::zeros(c.b().dim(), c.b().dim());
    for (lambda, p) in spec.eigenvalues.iter().zip(&spec.projectors) {
        let pj = p.kron(&id2);
        weighted +=
            partial_trace_matrix(&(pj.matrix() * rho), dims, &keep) * C64::new(*lambda, 0.0);
    }
    let rho2 = partial_trace_matrix(rho, dims, &keep);
    let b = c.b().matrix();
    Ok(
        commutator(b, &weighted) * C64::new(0.0, -c.s2_coefficient())
            + apply_dissipator(b, &rho2) * C64::new(c.eta() * c.eta() / c.gamma(), 0.0),
    )
}

/// Time derivative of the S1 marginal assembled from the reduced form:
/// `−i(g − η sin φ) Σ_j λ_j^{(b)} [A, tr₂((𝟙⊗Q_j)ρ)] + γ𝒟[A](tr₂ρ)`.
pub fn s1_marginal_rhs(c: &DissipativeCoupling, rho: &CMatrix) -> Result<CMatrix> {
    let space = c.full_space();
    let dims = space.factor_dims();
    let keep = c.s1_factors();
    let spec = herm_eig(c.b())?;
    let id1 = Operator::identity(c.s1_space());
    let mut weighted = CMatrix::zeros(c.a().dim(), c.a().dim());
    for (lambda, q) in spec.eigenvalues.iter().zip(&spec.projectors) {
        let qj = id1.kron(q);
        weighted +=
            partial_trace_matrix(&(qj.matrix() * rho), dims, &keep) * C64::new(*lambda, 0.0);
    }
    let rho1 = partial_trace_matrix(rho, dims, &keep);
    let a = c.a().matrix();
    Ok(
        commutator(a, &weighted) * C64::new(0.0, -c.s1_coefficient())
            + apply_dissipator(a, &rho1) * C64::new(c.gamma(), 0.0),
    )
}

/// Uni-directional term `iη([A₁ρ, B₂] + [ρA₁, B₂])`.
pub fn cascaded_generator(c: &DissipativeCoupling) -> SuperOperator {
    let a1 = c.a1();
    let b2 = c.b2();
    let terms = &(&SuperOperator::sandwich(&a1, &b2) - &SuperOperator::left(&(&b2 * &a1)))
        + &(&SuperOperator::right(&(&a1 * &b2)) - &SuperOperator::sandwich(&b2, &a1));
    terms.scaled(C64::new(0.0, c.eta()))
}
