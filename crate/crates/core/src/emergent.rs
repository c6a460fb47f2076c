// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Strong-damping limit of the dissipative coupling and finite-γ gaps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::liouville::{build_full_generator, propagate, DissipativeCoupling};
use crate::opcore::{expm, herm_eig, trace_distance, CMatrix, DensityMatrix, Operator, C64};

/// Tolerance on `Σ p_j = 1`.
pub const PROBABILITY_TOL: f64 = 1e-12;
/// Tolerance on unitarity of each mixture element.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Exponents further than this from −1 are flagged.
pub const ANOMALY_TOL: f64 = 0.2;

/// `ℰ(ρ) = Σ_j p_j U_j ρ U_j†`
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMixture {
    probs: Vec<f64>,
    unitaries: Vec<Operator>,
    eigenvalues: Vec<f64>,
}

impl UnitaryMixture {
    pub fn new(probs: Vec<f64>, unitaries: Vec<Operator>, eigenvalues: Vec<f64>) -> Result<Self> {
        if probs.len() != unitaries.len() || probs.len() != eigenvalues.len() {
            return Err(Error::DimMismatch {
                expected: probs.len(),
                found: unitaries.len(),
            });
        }
        if unitaries.is_empty() {
            return Err(Error::InvalidParameter("empty unitary mixture".into()));
        }
        if probs.iter().any(|&p| !(p >= -PROBABILITY_TOL)) {
            return Err(Error::InvalidParameter("negative mixture weight".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidParameter(format!("weights sum to {total}")));
        }
        let space = unitaries[0].space();
        for u in &unitaries {
            if u.space() != space {
                return Err(Error::DimMismatch {
                    expected: space.total_dim(),
                    found: u.dim(),
                });
            }
            let dev = u.unitarity_deviation();
            if dev > UNITARITY_TOL {
                return Err(Error::InvalidParameter(format!(
                    "non-unitary element (deviation {dev:.3e})"
                )));
            }
        }
        let probs = probs.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self {
            probs,
            unitaries,
            eigenvalues,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn unitaries(&self) -> &[Operator] {
        &self.unitaries
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Terms with nonzero weight.
    pub fn effective_terms(&self) -> Vec<(f64, &Operator)> {
        self.probs
            .iter()
            .zip(&self.unitaries)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, u)| (*p, u))
            .collect()
    }

    /// The map at `t₁ + t₂` from maps at `t₁` (self) and `t₂` (later).
    pub fn then(&self, later: &UnitaryMixture) -> Result<UnitaryMixture> {
        if self.probs != later.probs || self.eigenvalues != later.eigenvalues {
            return Err(Error::InvalidParameter(
                "mixtures with different weights do not compose term by term".into(),
            ));
        }
        let unitaries = later
            .unitaries
            .iter()
            .zip(&self.unitaries)
            .map(|(u2, u1)| u2 * u1)
            .collect();
        Ok(UnitaryMixture {
            probs: self.probs.clone(),
            unitaries,
            eigenvalues: self.eigenvalues.clone(),
        })
    }
}

/// Strong-damping map for S2 with `p_j = tr(P_j ρ₁)` over the eigenspaces of
/// `A` and `U_j = exp(−i t λ_j (g + η sin φ) B)`.
pub fn strong_damping_map(
    c: &DissipativeCoupling,
    rho1_init: &DensityMatrix,
    t: f64,
) -> Result<UnitaryMixture> {
    if rho1_init.space() != c.s1_space() {
        return Err(Error::DimMismatch {
            expected: c.a().dim(),
            found: rho1_init.dim(),
        });
    }
    let spec = herm_eig(c.a())?;
    let kappa = c.s2_coefficient();
    let probs = spec
        .projectors
        .iter()
        .map(|p| rho1_init.expectation(p).re)
        .collect();
    let unitaries = spec
        .eigenvalues
        .iter()
        .map(|&lambda| expm(c.b(), C64::new(0.0, -t * lambda * kappa)))
        .collect();
    UnitaryMixture::new(probs, unitaries, spec.eigenvalues.clone())
}

/// `Σ_j p_j U_j ρ₂ U_j†`
pub fn apply_mixture(m: &UnitaryMixture, rho2: &DensityMatrix) -> Result<DensityMatrix> {
    let space = m.unitaries[0].space();
    if rho2.space() != space {
        return Err(Error::DimMismatch {
            expected: space.total_dim(),
            found: rho2.dim(),
        });
    }
    let d = rho2.dim();
    let mut out = CMatrix::zeros(d, d);
    for (p, u) in m.probs.iter().zip(&m.unitaries) {
        if *p > 0.0 {
            out += u.matrix() * rho2.matrix() * u.matrix().adjoint() * C64::new(*p, 0.0);
        }
    }
    let sym = (&out + out.adjoint()) * C64::new(0.5, 0.0);
    Ok(DensityMatrix::new_unchecked(space.clone(), sym))
}

/// S2 marginal after `exp(t𝒟[L])` with `g = 0`.
pub fn dissipative_s2_marginal(
    c: &DissipativeCoupling,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let pure = c.with_g(0.0)?;
    let rho0 = pure.product_state(rho1, rho2)?;
    let out = propagate(&build_full_generator(&pure, false), &rho0, t)?;
    out.partial_trace(&c.s2_factors())
}

/// S2 marginal under the unitary generated by `H = η sin φ A₁B₂`.
pub fn coherent_s2_marginal(
    c: &DissipativeCoupling,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let rho0 = c.product_state(rho1, rho2)?;
    let h = (&c.a1() * &c.b2()).scaled_real(c.eta() * c.phi().sin());
    let u = expm(&h, C64::new(0.0, -t));
    let m = u.matrix() * rho0.matrix() * u.matrix().adjoint();
    let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new_unchecked(rho0.space().clone(), sym).partial_trace(&c.s2_factors())
}

/// Trace distance between the dissipatively and coherently evolved S2
/// marginals at time `t`.
pub fn equivalence_gap(
    c: &DissipativeCoupling,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    t: f64,
) -> Result<f64> {
    let diss = dissipative_s2_marginal(c, rho1, rho2, t)?;
    let coh = coherent_s2_marginal(c, rho1, rho2, t)?;
    trace_distance(&diss, &coh)
}

/// Gap sweep and its log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaScaling {
    pub gammas: Vec<f64>,
    pub gaps: Vec<f64>,
    pub fit: PowerLawFit,
    pub anomalous: bool,
}

/// Gaps for each `γ`, evaluated in parallel and returned in input order.
pub fn gap_sweep(
    template: &DissipativeCoupling,
    gammas: &[f64],
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    t: f64,
) -> Result<Vec<f64>> {
    gammas
        .par_iter()
        .map(|&g| equivalence_gap(&template.with_gamma(g)?, rho1, rho2, t))
        .collect()
}

/// Fits `gap ∝ γ^k` over a sweep of at least four rates spanning two decades.
pub fn gamma_scaling_fit(
    template: &DissipativeCoupling,
    gammas: &[f64],
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    t: f64,
) -> Result<GammaScaling> {
    if gammas.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 gamma values, got {}",
            gammas.len()
        )));
    }
    let lo = gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = gammas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::DegenerateFit(
            "gamma values must span two decades".into(),
        ));
    }
    let gaps = gap_sweep(template, gammas, rho1, rho2, t)?;
    let fit = fit_power_law(gammas, &gaps)?;
    Ok(GammaScaling {
        gammas: gammas.to_vec(),
        gaps,
        anomalous: fit.is_anomalous(ANOMALY_TOL),
        fit,
    })
}

/// Which subsystem drives the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// S1 drives S2; S1 is unaffected.
    S1ToS2,
    /// S2 drives S1; S2 is unaffected.
    S2ToS1,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::S1ToS2 => write!(f, "S1->S2"),
            Direction::S2ToS1 => write!(f, "S2->S1"),
        }
    }
}

/// Drift coefficients and simulated marginal shifts for one coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonreciprocityReport {
    /// `g + η sin φ`
    pub s2_coefficient: f64,
    /// `g − η sin φ`
    pub s1_coefficient: f64,
    /// `λ_j^{(a)}(g + η sin φ)` per distinct eigenvalue of `A`.
    pub s2_drifts: Vec<f64>,
    /// `λ_j^{(b)}(g − η sin φ)` per distinct eigenvalue of `B`.
    pub s1_drifts: Vec<f64>,
    /// Trace distance of the S1 marginal from the `η = 0` reference.
    pub s1_shift: f64,
    /// Trace distance of the S2 marginal from the `η = 0` reference.
    pub s2_shift: f64,
    /// Trace distance of the S1 marginal from evolution under `γ𝒟[A]` alone.
    pub s1_isolation: f64,
    /// Trace distance of the S2 marginal from evolution under `(η²/γ)𝒟[B]` alone.
    pub s2_isolation: f64,
    pub direction: Option<Direction>,
}

/// Relative scale below which a drift coefficient counts as cancelled.
const CANCEL_RTOL: f64 = 1e-12;

fn product_factors(
    c: &DissipativeCoupling,
    rho0: &DensityMatrix,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho0.space() != &c.full_space() {
        return Err(Error::DimMismatch {
            expected: c.full_space().total_dim(),
            found: rho0.dim(),
        });
    }
    let r1 = rho0.partial_trace(&c.s1_factors())?;
    let r2 = rho0.partial_trace(&c.s2_factors())?;
    let dev = (r1.tensor(&r2).matrix() - rho0.matrix()).camax();
    if dev > 1e-9 {
        return Err(Error::InvalidState(format!(
            "initial state is not a product state (deviation {dev:.3e})"
        )));
    }
    Ok((r1, r2))
}

fn marginals(
    c: &DissipativeCoupling,
    include_coherent: bool,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let out = propagate(&build_full_generator(c, include_coherent), rho0, t)?;
    Ok((
        out.partial_trace(&c.s1_factors())?,
        out.partial_trace(&c.s2_factors())?,
    ))
}

pub fn nonreciprocity_report(
    c: &DissipativeCoupling,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<NonreciprocityReport> {
    let (r1, r2) = product_factors(c, rho0)?;
    let (m1, m2) = marginals(c, true, rho0, t)?;
    let (ref1, ref2) = marginals(&c.with_eta(0.0)?, true, rho0, t)?;

    // local channels only: γ𝒟[A] on S1, (η²/γ)𝒟[B] on S2
    let local1 = {
        let iso = c.with_eta(0.0)?.with_g(0.0)?;
        let out = propagate(
            &build_full_generator(&iso, false),
            &iso.product_state(&r1, &r2)?,
            t,
        )?;
        out.partial_trace(&c.s1_factors())?
    };
    let local2 = {
        let rate = c.eta() * c.eta() / c.gamma();
        let gen = crate::opcore::dissipator_superop(c.b()).scaled_real(rate);
        propagate(&gen, &r2, t)?
    };

    let a_spec = herm_eig(c.a())?;
    let b_spec = herm_eig(c.b())?;
    let k2 = c.s2_coefficient();
    let k1 = c.s1_coefficient();
    let scale = c.g().abs().max(c.eta()).max(f64::MIN_POSITIVE);
    let zero1 = k1.abs() <= CANCEL_RTOL * scale;
    let zero2 = k2.abs() <= CANCEL_RTOL * scale;
    let direction = match (zero1, zero2) {
        (true, false) => Some(Direction::S1ToS2),
        (false, true) => Some(Direction::S2ToS1),
        _ => None,
    };
    Ok(NonreciprocityReport {
        s2_coefficient: k2,
        s1_coefficient: k1,
        s2_drifts: a_spec.eigenvalues.iter().map(|l| l * k2).collect(),
        s1_drifts: b_spec.eigenvalues.iter().map(|l| l * k1).collect(),
        s1_shift: trace_distance(&m1, &ref1)?,
        s2_shift: trace_distance(&m2, &ref2)?,
        s1_isolation: trace_distance(&m1, &local1)?,
        s2_isolation: trace_distance(&m2, &local2)?,
        direction,
    })
}
