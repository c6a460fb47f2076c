// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use super::{ControlPulse, DissipativeCoupling};
use crate::error::{Error, Result};
use crate::opcore::density::POSITIVITY_TOL;
use crate::opcore::expm::norm1;
use crate::opcore::superop::{devectorize, vectorize};
use crate::opcore::{
    expm_action, expm_dense, CMatrix, DensityMatrix, HilbertSpace, LinearMap, SuperOperator, C64,
};

use super::generator::build_full_generator;

/// Largest anti-Hermitian drift that is silently symmetrized away.
pub const HERMITICITY_DRIFT_TOL: f64 = 1e-10;

/// `exp(t·gen)` applied to `rho0`.
pub fn propagate(gen: &SuperOperator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if gen.space() != rho0.space() {
        return Err(Error::DimMismatch {
            expected: gen.space().total_dim(),
            found: rho0.dim(),
        });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "propagation time must be non-negative, got {t}"
        )));
    }
    let n = gen.dim() as f64;
    let norm = norm1(gen.matrix()) * t;
    // dense scaling and squaring is cheaper for stiff generators
    if 12.0 * norm > n * (6.0 + norm.max(1.0).log2()) {
        let prop = expm_dense(&(gen.matrix() * C64::new(t, 0.0)));
        let out = prop * vectorize(rho0.matrix());
        return finalize_state(rho0.space(), devectorize(&out, rho0.dim()));
    }
    propagate_map(gen, rho0, t)
}

/// Propagation with any linear map acting on row-vectorized states.
pub fn propagate_map<M: LinearMap + ?Sized>(
    map: &M,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "propagation time must be non-negative, got {t}"
        )));
    }
    let d = rho0.dim();
    if map.dim() != d * d {
        return Err(Error::DimMismatch {
            expected: map.dim(),
            found: d * d,
        });
    }
    let out = expm_action(map, &vectorize(rho0.matrix()), t);
    finalize_state(rho0.space(), devectorize(&out, d))
}

/// Symmetrizes a propagated matrix and checks that it is still a state.
pub fn finalize_state(space: &HilbertSpace, m: CMatrix) -> Result<DensityMatrix> {
    let drift = (&m - m.adjoint()).camax();
    if !(drift <= HERMITICITY_DRIFT_TOL) {
        return Err(Error::NonPhysicalResult(format!(
            "Hermiticity drift {drift:.3e}"
        )));
    }
    let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let rho = DensityMatrix::new_unchecked(space.clone(), sym);
    let min = rho.min_eigenvalue();
    if min < -POSITIVITY_TOL {
        return Err(Error::NonPhysicalResult(format!(
            "negative eigenvalue {min:.3e}"
        )));
    }
    Ok(rho)
}

/// Segment-by-segment propagation under the full generator plus
/// `−i[𝟙 ⊗ H_seg, ·]`.
pub fn propagate_controlled(
    c: &DissipativeCoupling,
    pulse: &ControlPulse,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    if let Some(h) = pulse.hamiltonians().first() {
        if h.space() != c.s2_space() {
            return Err(Error::DimMismatch {
                expected: c.b().dim(),
                found: h.dim(),
            });
        }
    }
    let base = build_full_generator(c, true);
    let mut rho = rho0.clone();
    for (k, seg) in pulse.segments().iter().enumerate() {
        rho = match pulse.segment_hamiltonian(k) {
            Some(h) => {
                let gen = &base + &SuperOperator::hamiltonian(&c.lift_s2(&h)?);
                propagate(&gen, &rho, seg.duration)?
            }
            None => propagate(&base, &rho, seg.duration)?,
        };
    }
    Ok(rho)
}
