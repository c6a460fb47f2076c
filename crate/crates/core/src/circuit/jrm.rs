// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Three-qubit Josephson-ring-modulator coupler in its resonant frame.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::elimination::{build_system_bath, BosonicMode, SystemBathSpec};
use super::tones::ToneSet;
use crate::emergent::Direction;
use crate::error::{Error, Result};
use crate::liouville::{DissipativeCoupling, MasterEquation};
use crate::opcore::pauli::sigma_x;
use crate::opcore::{tensor, trace_distance, DensityMatrix, HilbertSpace, Operator};

/// Largest admissible participation ratio `λ_nz`.
pub const DISPERSIVE_LIMIT: f64 = 0.3;
/// Tolerance for the tone-phase reduction.
pub const PHASE_TOL: f64 = 1e-12;
/// Margin used to flag `λ₂z²λ₃z² ≪ λ₁z²`.
pub const HIERARCHY_MARGIN: f64 = 1e-2;

fn default_phi_ext() -> f64 {
    FRAC_PI_4
}

fn default_phi0() -> f64 {
    1.0
}

/// Circuit parameters. `alpha_x`, `alpha_y` are the modulation amplitudes
/// already evaluated at the bias point `phi_ext`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub e_j: f64,
    #[serde(default = "default_phi_ext")]
    pub phi_ext: f64,
    #[serde(default = "default_phi0")]
    pub phi0: f64,
    pub phi_z0: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub lambda_z: [f64; 3],
    pub omega: [f64; 3],
    pub mode: BosonicMode,
}

/// Effective constants of the resonant model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoupling {
    /// `Λ = (E_J α′_x α′_y/√2)(φ_z0²/4φ₀²)`
    pub lambda: f64,
    /// `β = λ₂z λ₃z φ_z0/(2φ₀)`
    pub beta: f64,
    /// `Λ²λ₁z²/(4γ_z)`
    pub gamma_eff: f64,
    /// `β/λ₁z`
    pub eta_over_gamma: f64,
    pub eta: f64,
    /// Three-body strength `Λλ₁zβ/4`.
    pub g: f64,
    /// System-bath couplings `−Λλ₁z/4` and `−Λβ/4`.
    pub lambda1: f64,
    pub lambda2: f64,
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("E_J", self.e_j),
            ("phi0", self.phi0),
            ("phi_z0", self.phi_z0),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        if self.omega.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter(
                "qubit frequencies must be positive".into(),
            ));
        }
        if self.lambda_z[0] == 0.0 {
            return Err(Error::ZeroPrimaryCoupling);
        }
        Ok(())
    }

    pub fn check_dispersive(&self) -> Result<()> {
        for (i, &l) in self.lambda_z.iter().enumerate() {
            if l.abs() > DISPERSIVE_LIMIT {
                return Err(Error::DispersiveViolation {
                    index: i + 1,
                    value: l,
                    limit: DISPERSIVE_LIMIT,
                });
            }
        }
        Ok(())
    }

    pub fn effective(&self) -> Result<EffectiveCoupling> {
        self.validate()?;
        let [l1, l2, l3] = self.lambda_z;
        let flux = self.phi_z0 / self.phi0;
        let lambda = self.e_j * self.alpha_x * self.alpha_y / 2f64.sqrt() * flux * flux / 4.0;
        let beta = l2 * l3 * flux / 2.0;
        let gamma_eff = lambda * lambda * l1 * l1 / (4.0 * self.mode.gamma_z);
        let eta_over_gamma = beta / l1;
        Ok(EffectiveCoupling {
            lambda,
            beta,
            gamma_eff,
            eta_over_gamma,
            eta: gamma_eff * eta_over_gamma,
            g: lambda * l1 * beta / 4.0,
            lambda1: -lambda * l1 / 4.0,
            lambda2: -lambda * beta / 4.0,
        })
    }

    pub fn system_bath_spec(&self, phi1: f64, phi2: f64) -> Result<SystemBathSpec> {
        let eff = self.effective()?;
        Ok(SystemBathSpec {
            lambda1: eff.lambda1,
            lambda2: eff.lambda2,
            phi1,
            phi2,
            mode: self.mode,
            detuning: 0.0,
        })
    }
}

fn xx() -> Operator {
    sigma_x().kron(&sigma_x())
}

/// `Λ`, `β`, `γ_eff` and `η/γ` for the given circuit.
pub fn effective_coupling_constants(params: &CircuitParams) -> Result<EffectiveCoupling> {
    params.effective()
}

/// Coherent three-body term `−cos θ (λ/4) σ₁ˣσ₂ˣσ₃ˣ`, `λ = Λλ₁zβ`.
pub fn coherent_three_body(params: &CircuitParams, theta: f64) -> Result<Operator> {
    let eff = params.effective()?;
    Ok(tensor(&[&sigma_x(), &sigma_x(), &sigma_x()]).scaled_real(-theta.cos() * eff.g))
}

/// Master equation on qubits ⊗ mode:
/// `−(Λ/4)(λ₁z X_{φ₁} σ₁ˣ + β X_{φ₂} σ₂ˣσ₃ˣ)` plus the optional three-body term at `theta`.
pub fn build_jrm_with_phases(
    params: &CircuitParams,
    phi1: f64,
    phi2: f64,
    theta: Option<f64>,
) -> Result<MasterEquation> {
    params.check_dispersive()?;
    let spec = params.system_bath_spec(phi1, phi2)?;
    let bath = build_system_bath(&spec, &sigma_x(), &xx())?;
    let Some(theta) = theta else {
        return Ok(bath);
    };
    let mode = Operator::identity(&params.mode.space());
    let coherent = coherent_three_body(params, theta)?.kron(&mode);
    let h = bath.hamiltonian() + &coherent;
    MasterEquation::new(h, bath.jumps().to_vec())
}

/// [`build_jrm_with_phases`] with `(φ₁, φ₂)` read from a dissipative tone plan.
pub fn build_jrm_effective(
    params: &CircuitParams,
    tones: &ToneSet,
    theta: Option<f64>,
) -> Result<MasterEquation> {
    let (phi1, phi2) = tones.reduced_phases(PHASE_TOL)?;
    build_jrm_with_phases(params, phi1, phi2, theta)
}

/// The eliminated model as a [`DissipativeCoupling`] with `A = σ₁ˣ`, `B = σ₂ˣσ₃ˣ`.
pub fn jrm_reduced_coupling(
    params: &CircuitParams,
    phi1: f64,
    phi2: f64,
    theta: Option<f64>,
) -> Result<DissipativeCoupling> {
    let spec = params.system_bath_spec(phi1, phi2)?;
    let c = spec.equivalent_coupling(&sigma_x(), &xx())?;
    match theta {
        Some(theta) => c.with_g(-theta.cos() * params.effective()?.g),
        None => Ok(c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongDampingReport {
    /// `γ_eff (λ₂z²λ₃z²/λ₁z²)(φ_z0²/4φ₀²)`, which equals `η²/γ`.
    pub value: f64,
    pub threshold: f64,
    pub satisfied: bool,
    /// `λ₂z²λ₃z²/λ₁z²`
    pub hierarchy_ratio: f64,
    pub hierarchy_ok: bool,
}

pub fn strong_damping_condition(
    params: &CircuitParams,
    threshold: f64,
) -> Result<StrongDampingReport> {
    let eff = params.effective()?;
    let [l1, l2, l3] = params.lambda_z;
    let flux = params.phi_z0 / params.phi0;
    let hierarchy_ratio = l2 * l2 * l3 * l3 / (l1 * l1);
    let value = eff.gamma_eff * hierarchy_ratio * flux * flux / 4.0;
    Ok(StrongDampingReport {
        value,
        threshold,
        satisfied: value < threshold,
        hierarchy_ratio,
        hierarchy_ok: hierarchy_ratio <= HIERARCHY_MARGIN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonreciprocityCheck {
    pub phase_ok: bool,
    pub rate_ok: bool,
    pub satisfied: bool,
    pub direction: Direction,
}

/// Checks `|φ| = π/2` and `Λ = γ_z` to relative tolerance `rtol`.
/// The direction follows the sign of `φ`.
pub fn nonreciprocity_conditions(
    params: &CircuitParams,
    phi: f64,
    rtol: f64,
) -> Result<NonreciprocityCheck> {
    let eff = params.effective()?;
    let wrapped = (phi + PI).rem_euclid(2.0 * PI) - PI;
    let phase_ok = (wrapped.abs() - PI / 2.0).abs() <= rtol * PI / 2.0;
    let rate_ok = (eff.lambda - params.mode.gamma_z).abs() <= rtol * params.mode.gamma_z;
    Ok(NonreciprocityCheck {
        phase_ok,
        rate_ok,
        satisfied: phase_ok && rate_ok,
        direction: if wrapped >= 0.0 {
            Direction::S1ToS2
        } else {
            Direction::S2ToS1
        },
    })
}

/// Finite-`γ_z` deviations of the three-qubit model with the three-body term at `θ = π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JrmIsolation {
    /// Qubit-1 marginal of the full model against free decay under `γ_eff D[σˣ]`.
    pub isolation: f64,
    /// Three-qubit marginal of the full model against the eliminated model.
    pub elimination: f64,
}

/// Propagates qubits ⊗ mode (mode in vacuum) and compares with the eliminated
/// model and with isolated decay of qubit 1. Under the nonreciprocity
/// conditions `isolation ≤ elimination` by contractivity of the partial trace.
pub fn jrm_isolation(
    params: &CircuitParams,
    phi1: f64,
    phi2: f64,
    rho1: &DensityMatrix,
    rho23: &DensityMatrix,
    t: f64,
) -> Result<JrmIsolation> {
    let eff = params.effective()?;
    let full = build_jrm_with_phases(params, phi1, phi2, Some(PI))?;
    let rho_sys = rho1.tensor(rho23);
    let out = full.propagate(&rho_sys.tensor(&params.mode.vacuum()), t)?;
    let l = params
        .system_bath_spec(phi1, phi2)?
        .effective_jump(&sigma_x(), &xx())?;
    let l = l.with_space(rho_sys.space().clone())?;
    let h = coherent_three_body(params, PI)?;
    let reduced = MasterEquation::new(h, vec![(l, 1.0)])?.propagate(&rho_sys, t)?;
    let elimination = trace_distance(&out.partial_trace(&[0, 1, 2])?, &reduced)?;
    let free = MasterEquation::new(
        Operator::zeros(&HilbertSpace::single(2)),
        vec![(sigma_x(), eff.gamma_eff)],
    )?;
    let isolation = trace_distance(&out.partial_trace(&[0])?, &free.propagate(rho1, t)?)?;
    Ok(JrmIsolation {
        isolation,
        elimination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::tones::plan_dissipative_tones;
    use crate::liouville::build_full_generator;
    use crate::opcore::superop::dissipator_superop;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    pub(crate) fn matched(gamma_z: f64, l1: f64) -> CircuitParams {
        // Λ = E_J α² / √2 · 1/4 with φ_z0 = φ₀; choose E_J so that Λ = γ_z.
        let e_j = gamma_z * 4.0 * 2f64.sqrt();
        CircuitParams {
            e_j,
            phi_ext: FRAC_PI_4,
            phi0: 1.0,
            phi_z0: 1.0,
            alpha_x: 1.0,
            alpha_y: 1.0,
            lambda_z: [l1, 0.1, 0.1],
            omega: [5.0, 6.0, 4.0],
            mode: BosonicMode::new(4, 12.0, gamma_z).unwrap(),
        }
    }

    #[test]
    fn constants() {
        let p = matched(100.0, 0.2);
        let e = p.effective().unwrap();
        assert!((e.lambda - 100.0).abs() < 1e-12);
        assert!((e.beta - 0.005).abs() < 1e-15);
        assert!((e.gamma_eff - 1.0).abs() < 1e-12);
        assert!((e.eta - e.g).abs() < 1e-14 * e.g);
        let nr = nonreciprocity_conditions(&p, FRAC_PI_2, 1e-9).unwrap();
        assert!(nr.satisfied);
        assert_eq!(nr.direction, Direction::S1ToS2);
        let nr = nonreciprocity_conditions(&p, -FRAC_PI_2, 1e-9).unwrap();
        assert_eq!(nr.direction, Direction::S2ToS1);
        assert!(!nonreciprocity_conditions(&p, 1.0, 1e-9).unwrap().phase_ok);
        let mut off = p;
        off.mode.gamma_z = 101.0;
        assert!(
            !nonreciprocity_conditions(&off, FRAC_PI_2, 1e-9)
                .unwrap()
                .rate_ok
        );
    }

    #[test]
    fn strong_damping_value_is_eta_squared_over_gamma() {
        let p = matched(100.0, 0.2);
        let e = p.effective().unwrap();
        let r = strong_damping_condition(&p, 1e-2).unwrap();
        assert!((r.value - e.eta * e.eta / e.gamma_eff).abs() < 1e-15);
        assert!(r.satisfied && r.hierarchy_ok);
    }

    #[test]
    fn constant_scalings() {
        let p = matched(50.0, 0.2);
        let e = effective_coupling_constants(&p).unwrap();
        assert!((2.0 * (e.gamma_eff * p.mode.gamma_z).sqrt() - e.lambda * 0.2).abs() < 1e-12);
        let mut q = p;
        q.alpha_x *= 2.0;
        q.alpha_y *= 2.0;
        let e2 = effective_coupling_constants(&q).unwrap();
        assert!((e2.lambda / e.lambda - 4.0).abs() < 1e-12);
        assert!((e2.gamma_eff / e.gamma_eff - 16.0).abs() < 1e-12);
        let mut r = p;
        r.lambda_z[1] *= 3.0;
        assert!((effective_coupling_constants(&r).unwrap().beta / e.beta - 3.0).abs() < 1e-12);
        let s = strong_damping_condition(&p, 1e-2).unwrap();
        assert!((strong_damping_condition(&q, 1e-2).unwrap().value / s.value - 16.0).abs() < 1e-12);
    }

    #[test]
    fn hierarchy_flags() {
        let mut p = matched(100.0, 0.2);
        p.lambda_z = [0.2, 0.02, 0.02];
        let r = strong_damping_condition(&p, 1e-2).unwrap();
        assert!((r.hierarchy_ratio - 1.6e-7 / 0.04).abs() < 1e-18);
        assert!(r.satisfied && r.hierarchy_ok);
        p.lambda_z = [0.2, 0.2, 0.2];
        assert!(!strong_damping_condition(&p, 1e-2).unwrap().hierarchy_ok);
    }

    #[test]
    fn tone_phases_feed_the_model() {
        let p = matched(100.0, 0.2);
        let tones = plan_dissipative_tones(
            p.omega,
            p.mode.omega_z,
            0.0,
            [0.3, 0.3 + 1.5 * PI, 0.3 + 1.5 * PI],
        )
        .unwrap();
        let a = build_jrm_effective(&p, &tones, None).unwrap();
        let b = build_jrm_with_phases(&p, 0.3, 0.3 + 1.5 * PI, None).unwrap();
        assert!((a.hamiltonian() - b.hamiltonian()).max_abs() < 1e-15);
        let skew = plan_dissipative_tones(p.omega, p.mode.omega_z, 0.2, [0.3, 0.3, 0.3]).unwrap();
        assert!(build_jrm_effective(&p, &skew, None).is_err());
    }

    #[test]
    fn uncoupled_pair_is_frozen() {
        let mut p = matched(20.0, 0.2);
        p.lambda_z[1] = 0.0;
        let full = build_jrm_with_phases(&p, 0.0, 0.0, None).unwrap();
        let plus = DensityMatrix::pure(
            &HilbertSpace::single(2),
            &nalgebra::DVector::from_element(2, crate::opcore::C64::new(FRAC_1_SQRT_2, 0.0)),
        )
        .unwrap();
        let zero = DensityMatrix::basis(&HilbertSpace::single(2), 0).unwrap();
        let rho23 = zero.tensor(&plus);
        let rho0 = zero.tensor(&rho23).tensor(&p.mode.vacuum());
        let out = full
            .propagate(&rho0, 0.5)
            .unwrap()
            .partial_trace(&[1, 2])
            .unwrap();
        assert!((out.matrix() - rho23.matrix()).camax() < 1e-10);
    }

    #[test]
    fn isolation_oracle() {
        let mut p = matched(40.0, 0.2);
        p.mode = BosonicMode::new(4, 12.0, 40.0).unwrap();
        let q = HilbertSpace::single(2);
        let zero = DensityMatrix::basis(&q, 0).unwrap();
        let plus = DensityMatrix::pure(
            &q,
            &nalgebra::DVector::from_element(2, crate::opcore::C64::new(FRAC_1_SQRT_2, 0.0)),
        )
        .unwrap();
        let r = jrm_isolation(&p, 0.3, 0.3 + 1.5 * PI, &zero, &zero.tensor(&plus), 1.0).unwrap();
        // scipy expm on the column-stacked Liouvillian
        assert!(
            (r.isolation - 0.0091686221170737).abs() < 1e-9,
            "{}",
            r.isolation
        );
        assert!(r.isolation <= r.elimination + 1e-12);
    }

    #[test]
    fn dispersive_guard() {
        let mut p = matched(100.0, 0.2);
        p.lambda_z[1] = 0.31;
        assert!(matches!(
            build_jrm_with_phases(&p, 0.0, 0.0, None),
            Err(Error::DispersiveViolation { index: 2, .. })
        ));
    }

    #[test]
    fn coherent_sign() {
        let p = matched(100.0, 0.2);
        let g = p.effective().unwrap().g;
        let h = coherent_three_body(&p, PI).unwrap();
        let expected = tensor(&[&sigma_x(), &sigma_x(), &sigma_x()]).scaled_real(g);
        assert!((&h - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn reduced_coupling_matches_eliminated_jump() {
        let p = matched(100.0, 0.2);
        let phi = FRAC_PI_2;
        let (phi1, phi2) = (0.3, 0.3 + PI + phi);
        let c = jrm_reduced_coupling(&p, phi1, phi2, Some(PI)).unwrap();
        assert!((c.phi() - phi).abs() < 1e-12, "{}", c.phi());
        assert!((c.eta() - c.g()).abs() < 1e-14);
        assert!(c.s1_coefficient().abs() < 1e-14);
        let l = p
            .system_bath_spec(phi1, phi2)
            .unwrap()
            .effective_jump(&sigma_x(), &xx())
            .unwrap();
        let diff = (dissipator_superop(&l).matrix()
            - build_full_generator(&c.with_g(0.0).unwrap(), false).matrix())
        .camax();
        assert!(diff < 1e-12);
    }
}
