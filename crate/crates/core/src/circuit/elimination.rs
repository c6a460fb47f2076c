// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Adiabatic elimination of a damped bosonic mode coupled to two systems.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{DissipativeCoupling, MasterEquation};
use crate::opcore::boson::{annihilation, fock, quadrature};
use crate::opcore::{tensor, trace_distance, DensityMatrix, HilbertSpace, Operator, C64};

/// Default Fock truncation.
pub const DEFAULT_N_MAX: usize = 6;
/// Largest truncation tried by [`converged_elimination`].
pub const MAX_N_MAX: usize = 48;

/// Damped bosonic mode truncated at `n_max` excitations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BosonicMode {
    pub n_max: usize,
    pub omega_z: f64,
    pub gamma_z: f64,
}

impl BosonicMode {
    pub fn new(n_max: usize, omega_z: f64, gamma_z: f64) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_max = {n_max} must be at least 2"
            )));
        }
        if !(omega_z > 0.0) || !omega_z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode frequency {omega_z} must be positive"
            )));
        }
        if !(gamma_z > 0.0) || !gamma_z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode damping {gamma_z} must be positive"
            )));
        }
        Ok(Self {
            n_max,
            omega_z,
            gamma_z,
        })
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        Self::new(n_max, self.omega_z, self.gamma_z)
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::single(self.n_max + 1)
    }

    pub fn vacuum(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.space(), &fock(self.n_max, 0)).expect("normalized Fock state")
    }
}

/// Effective jump operator `(2λ₁/√γ_a)[A₁ + (λ₂/λ₁) e^{−i(φ₁−φ₂)} B₂]` on `S₁ ⊗ S₂`.
pub fn adiabatic_eliminate(
    lambda1: f64,
    lambda2: f64,
    phi1: f64,
    phi2: f64,
    gamma_a: f64,
    a: &Operator,
    b: &Operator,
) -> Result<Operator> {
    if lambda1 == 0.0 {
        return Err(Error::ZeroPrimaryCoupling);
    }
    if !(gamma_a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mode damping {gamma_a} must be positive"
        )));
    }
    let a1 = a.kron(&Operator::identity(b.space()));
    let b2 = Operator::identity(a.space()).kron(b);
    let rel = C64::from_polar(lambda2 / lambda1, -(phi1 - phi2));
    Ok((&a1 + &b2.scaled(rel)).scaled_real(2.0 * lambda1 / gamma_a.sqrt()))
}

/// Parameters of the resonant system-bath model
/// `H = λ₁ X_{φ₁} A₁ + λ₂ X_{φ₂} B₂`, `L_a = √γ_a a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemBathSpec {
    pub lambda1: f64,
    pub lambda2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub mode: BosonicMode,
    #[serde(default)]
    pub detuning: f64,
}

impl SystemBathSpec {
    /// Chooses `λ₁ = √(Γγ_a)/2` so the eliminated rate is `Γ` for every `γ_a`.
    pub fn for_effective_rate(
        gamma_eff: f64,
        ratio: f64,
        phi1: f64,
        phi2: f64,
        mode: BosonicMode,
    ) -> Result<Self> {
        if !(gamma_eff > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "effective rate {gamma_eff} must be positive"
            )));
        }
        let lambda1 = (gamma_eff * mode.gamma_z).sqrt() / 2.0;
        Ok(Self {
            lambda1,
            lambda2: ratio * lambda1,
            phi1,
            phi2,
            mode,
            detuning: 0.0,
        })
    }

    pub fn effective_rate(&self) -> f64 {
        4.0 * self.lambda1 * self.lambda1 / self.mode.gamma_z
    }

    /// Mean-occupation estimate `(2(|λ₁|‖A‖ + |λ₂|‖B‖)/γ_a)²`.
    pub fn occupation_estimate(&self, a: &Operator, b: &Operator) -> f64 {
        let amp = 2.0 * (self.lambda1.abs() * a.op_norm() + self.lambda2.abs() * b.op_norm())
            / self.mode.gamma_z;
        amp * amp
    }

    pub fn effective_jump(&self, a: &Operator, b: &Operator) -> Result<Operator> {
        adiabatic_eliminate(
            self.lambda1,
            self.lambda2,
            self.phi1,
            self.phi2,
            self.mode.gamma_z,
            a,
            b,
        )
    }

    /// The eliminated model written as a [`DissipativeCoupling`] with `g = 0`.
    pub fn equivalent_coupling(&self, a: &Operator, b: &Operator) -> Result<DissipativeCoupling> {
        if self.lambda1 == 0.0 {
            return Err(Error::ZeroPrimaryCoupling);
        }
        let gamma = self.effective_rate();
        let rel = C64::from_polar(self.lambda2 / self.lambda1, -(self.phi1 - self.phi2));
        let eta = gamma * rel.norm();
        let phi = if rel.norm() == 0.0 { 0.0 } else { (-rel).arg() };
        DissipativeCoupling::new(a.clone(), b.clone(), gamma, eta, phi, 0.0)
    }
}

/// Builds the master equation on `S₁ ⊗ S₂ ⊗ mode`.
pub fn build_system_bath(
    spec: &SystemBathSpec,
    a: &Operator,
    b: &Operator,
) -> Result<MasterEquation> {
    if spec.detuning != 0.0 {
        return Err(Error::NonzeroDetuning {
            detuning: spec.detuning,
        });
    }
    a.ensure_hermitian(crate::opcore::HERMITIAN_TOL)?;
    b.ensure_hermitian(crate::opcore::HERMITIAN_TOL)?;
    let n_max = spec.mode.n_max;
    let occupation = spec.occupation_estimate(a, b);
    if occupation > n_max as f64 / 2.0 {
        return Err(Error::TruncationTooSmall { n_max, occupation });
    }
    let ia = Operator::identity(a.space());
    let ib = Operator::identity(b.space());
    let x1 = quadrature(n_max, spec.phi1);
    let x2 = quadrature(n_max, spec.phi2);
    let h = &tensor(&[a, &ib, &x1]).scaled_real(spec.lambda1)
        + &tensor(&[&ia, b, &x2]).scaled_real(spec.lambda2);
    let jump = tensor(&[&ia, &ib, &annihilation(n_max)]);
    MasterEquation::new(h, vec![(jump, spec.mode.gamma_z)])
}

/// Trace distance between the `S₁ ⊗ S₂` marginal of the full model (mode
/// starting in vacuum) and the eliminated model with jump `l_eff`, at time `t`.
pub fn validate_elimination(
    full: &MasterEquation,
    l_eff: &Operator,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<f64> {
    let dims = full.space().factor_dims();
    let Some((&mode_dim, system_dims)) = dims.split_last() else {
        return Err(Error::InvalidParameter("empty space".into()));
    };
    let system = HilbertSpace::new(system_dims.to_vec())?;
    if rho0.space() != &system {
        return Err(Error::DimMismatch {
            expected: system.total_dim(),
            found: rho0.dim(),
        });
    }
    if l_eff.space().total_dim() != system.total_dim() {
        return Err(Error::DimMismatch {
            expected: system.total_dim(),
            found: l_eff.dim(),
        });
    }
    let l_eff = l_eff.clone().with_space(system.clone())?;
    let vacuum = DensityMatrix::pure(&HilbertSpace::single(mode_dim), &fock(mode_dim - 1, 0))?;
    let full_rho = rho0.tensor(&vacuum);
    let keep: Vec<usize> = (0..system_dims.len()).collect();
    let marginal = full.propagate(&full_rho, t)?.partial_trace(&keep)?;
    let effective = MasterEquation::new(Operator::zeros(&system), vec![(l_eff, 1.0)])?;
    let reduced = effective.propagate(rho0, t)?;
    trace_distance(&marginal, &reduced)
}

/// Elimination distance with the truncation doubled until two successive
/// values differ by less than `tol`. Returns `(distance, n_max used)`.
pub fn converged_elimination(
    spec: &SystemBathSpec,
    a: &Operator,
    b: &Operator,
    rho0: &DensityMatrix,
    t: f64,
    tol: f64,
) -> Result<(f64, usize)> {
    let l = spec.effective_jump(a, b)?;
    let run = |n: usize| -> Result<f64> {
        let s = SystemBathSpec {
            mode: spec.mode.with_n_max(n)?,
            ..*spec
        };
        validate_elimination(&build_system_bath(&s, a, b)?, &l, rho0, t)
    };
    let mut n = spec.mode.n_max;
    let mut prev = run(n)?;
    while 2 * n <= MAX_N_MAX {
        let next = run(2 * n)?;
        n *= 2;
        if (next - prev).abs() < tol {
            return Ok((next, n));
        }
        prev = next;
    }
    Err(Error::TruncationTooSmall {
        n_max: n,
        occupation: spec.occupation_estimate(a, b),
    })
}

/// Elimination error `(γ_a, distance)` for each mode damping at fixed effective rate.
#[allow(clippy::too_many_arguments)]
pub fn elimination_scan(
    a: &Operator,
    b: &Operator,
    gamma_eff: f64,
    ratio: f64,
    phi1: f64,
    phi2: f64,
    n_max: usize,
    rho0: &DensityMatrix,
    t: f64,
    gamma_as: &[f64],
) -> Result<Vec<(f64, f64)>> {
    gamma_as
        .par_iter()
        .map(|&gamma_a| {
            let mode = BosonicMode::new(n_max, 1.0, gamma_a)?;
            let spec = SystemBathSpec::for_effective_rate(gamma_eff, ratio, phi1, phi2, mode)?;
            let full = build_system_bath(&spec, a, b)?;
            let l = spec.effective_jump(a, b)?;
            Ok((gamma_a, validate_elimination(&full, &l, rho0, t)?))
        })
        .collect()
}
