// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Master equations for two subsystems with a non-local jump operator.

mod generator;
mod propagate;

use serde::{Deserialize, Serialize};

pub use generator::{
    build_full_generator, cascaded_generator, direct_generator, reduced_s1_generator,
    reduced_s2_generator, s1_marginal_rhs, s2_marginal_rhs, ReducedGenerator,
};
pub use propagate::{
    finalize_state, propagate, propagate_controlled, propagate_map, HERMITICITY_DRIFT_TOL,
};

use crate::error::{Error, Result};
use crate::opcore::{
    dissipator_superop, sparse_liouvillian, tensor, CsrMatrix, DensityMatrix, HilbertSpace,
    Operator, SuperOperator, C64, HERMITIAN_TOL,
};

/// Non-fatal observations about a coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplingWarning {
    /// `η ≥ γ`, outside the weak-ratio regime.
    EtaNotBelowGamma,
}

/// Coherent plus dissipative coupling between S1 (operator `A`) and S2
/// (operator `B`).
///
/// The jump operator is `L = √γ (A₁ − (η/γ) e^{iφ} B₂)` and the coherent part
/// `H = g A₁B₂`, with `A₁ = A ⊗ 𝟙` and `B₂ = 𝟙 ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipativeCoupling {
    a: Operator,
    b: Operator,
    gamma: f64,
    eta: f64,
    phi: f64,
    g: f64,
}

impl DissipativeCoupling {
    pub fn new(a: Operator, b: Operator, gamma: f64, eta: f64, phi: f64, g: f64) -> Result<Self> {
        a.ensure_hermitian(HERMITIAN_TOL)?;
        b.ensure_hermitian(HERMITIAN_TOL)?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta must be non-negative, got {eta}"
            )));
        }
        if !phi.is_finite() || !g.is_finite() {
            return Err(Error::InvalidParameter("phi and g must be finite".into()));
        }
        Ok(Self {
            a,
            b,
            gamma,
            eta,
            phi,
            g,
        })
    }

    pub fn a(&self) -> &Operator {
        &self.a
    }

    pub fn b(&self) -> &Operator {
        &self.b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            gamma,
            self.eta,
            self.phi,
            self.g,
        )
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            self.gamma,
            eta,
            self.phi,
            self.g,
        )
    }

    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            self.gamma,
            self.eta,
            phi,
            self.g,
        )
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            self.gamma,
            self.eta,
            self.phi,
            g,
        )
    }

    pub fn warnings(&self) -> Vec<CouplingWarning> {
        let mut w = Vec::new();
        if self.eta >= self.gamma {
            w.push(CouplingWarning::EtaNotBelowGamma);
        }
        w
    }

    pub fn s1_space(&self) -> &HilbertSpace {
        self.a.space()
    }

    pub fn s2_space(&self) -> &HilbertSpace {
        self.b.space()
    }

    pub fn full_space(&self) -> HilbertSpace {
        self.a.space().compose(self.b.space())
    }

    /// Factor indices of S1 inside the full space.
    pub fn s1_factors(&self) -> Vec<usize> {
        (0..self.a.space().num_factors()).collect()
    }

    /// Factor indices of S2 inside the full space.
    pub fn s2_factors(&self) -> Vec<usize> {
        let n1 = self.a.space().num_factors();
        (n1..n1 + self.b.space().num_factors()).collect()
    }

    /// `A ⊗ 𝟙`
    pub fn a1(&self) -> Operator {
        tensor(&[&self.a, &Operator::identity(self.b.space())])
    }

    /// `𝟙 ⊗ B`
    pub fn b2(&self) -> Operator {
        tensor(&[&Operator::identity(self.a.space()), &self.b])
    }

    /// Embeds an S2 operator as `𝟙 ⊗ H`.
    pub fn lift_s2(&self, h: &Operator) -> Result<Operator> {
        if h.space() != self.b.space() {
            return Err(Error::DimMismatch {
                expected: self.b.dim(),
                found: h.dim(),
            });
        }
        Ok(tensor(&[&Operator::identity(self.a.space()), h]))
    }

    /// `L = √γ (A₁ − (η/γ) e^{iφ} B₂)`
    pub fn jump(&self) -> Operator {
        let ratio = C64::from_polar(self.eta / self.gamma, self.phi);
        (&self.a1() - &self.b2().scaled(ratio)).scaled_real(self.gamma.sqrt())
    }

    /// `g A₁B₂`
    pub fn coherent_hamiltonian(&self) -> Operator {
        (&self.a1() * &self.b2()).scaled_real(self.g)
    }

    /// `g + η sin φ`, the commutator coefficient seen by S2.
    pub fn s2_coefficient(&self) -> f64 {
        self.g + self.eta * self.phi.sin()
    }

    /// `g − η sin φ`, the commutator coefficient seen by S1.
    pub fn s1_coefficient(&self) -> f64 {
        self.g - self.eta * self.phi.sin()
    }

    /// Product state `ρ₁ ⊗ ρ₂` after checking both factors.
    pub fn product_state(
        &self,
        rho1: &DensityMatrix,
        rho2: &DensityMatrix,
    ) -> Result<DensityMatrix> {
        if rho1.space() != self.s1_space() {
            return Err(Error::DimMismatch {
                expected: self.a.dim(),
                found: rho1.dim(),
            });
        }
        if rho2.space() != self.s2_space() {
            return Err(Error::DimMismatch {
                expected: self.b.dim(),
                found: rho2.dim(),
            });
        }
        Ok(rho1.tensor(rho2))
    }
}

/// One piecewise-constant control interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub coefficients: Vec<f64>,
}

/// Piecewise-constant control `H(t) = Σ_k f_k(t) H_k` acting on S2.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPulse {
    hamiltonians: Vec<Operator>,
    segments: Vec<Segment>,
}

impl ControlPulse {
    pub fn new(hamiltonians: Vec<Operator>, segments: Vec<Segment>) -> Result<Self> {
        if let Some(first) = hamiltonians.first() {
            for h in &hamiltonians {
                h.ensure_hermitian(HERMITIAN_TOL)?;
                if h.space() != first.space() {
                    return Err(Error::DimMismatch {
                        expected: first.dim(),
                        found: h.dim(),
                    });
                }
            }
        }
        for s in &segments {
            if !(s.duration > 0.0) || !s.duration.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "segment duration must be positive, got {}",
                    s.duration
                )));
            }
            if s.coefficients.len() != hamiltonians.len() {
                return Err(Error::DimMismatch {
                    expected: hamiltonians.len(),
                    found: s.coefficients.len(),
                });
            }
            if s.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(
                    "non-finite pulse coefficient".into(),
                ));
            }
        }
        Ok(Self {
            hamiltonians,
            segments,
        })
    }

    /// A pulse that applies no control for `duration`.
    pub fn idle(space: &HilbertSpace, duration: f64) -> Result<Self> {
        Self::new(
            vec![Operator::zeros(space)],
            vec![Segment {
                duration,
                coefficients: vec![0.0],
            }],
        )
    }

    pub fn hamiltonians(&self) -> &[Operator] {
        &self.hamiltonians
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// `Σ_k f_k H_k` for segment `index`, or `None` without control terms.
    pub fn segment_hamiltonian(&self, index: usize) -> Option<Operator> {
        let seg = &self.segments[index];
        let first = self.hamiltonians.first()?;
        let mut h = Operator::zeros(first.space());
        for (hk, &f) in self.hamiltonians.iter().zip(&seg.coefficients) {
            h = &h + &hk.scaled_real(f);
        }
        Some(h)
    }
}

/// `ρ̇ = −i[H, ρ] + Σ_k r_k 𝒟[L_k](ρ)`
#[derive(Debug, Clone, PartialEq)]
pub struct MasterEquation {
    space: HilbertSpace,
    hamiltonian: Operator,
    jumps: Vec<(Operator, f64)>,
}

impl MasterEquation {
    pub fn new(hamiltonian: Operator, jumps: Vec<(Operator, f64)>) -> Result<Self> {
        hamiltonian.ensure_hermitian(HERMITIAN_TOL)?;
        let space = hamiltonian.space().clone();
        for (l, rate) in &jumps {
            if l.space() != &space {
                return Err(Error::DimMismatch {
                    expected: space.total_dim(),
                    found: l.dim(),
                });
            }
            if !(*rate >= 0.0) || !rate.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "jump rates must be non-negative, got {rate}"
                )));
            }
        }
        Ok(Self {
            space,
            hamiltonian,
            jumps,
        })
    }

    /// Master equation with the single jump `L` and Hamiltonian `H`.
    pub fn from_coupling(c: &DissipativeCoupling, include_coherent: bool) -> Self {
        let h = if include_coherent {
            c.coherent_hamiltonian()
        } else {
            Operator::zeros(&c.full_space())
        };
        Self {
            space: c.full_space(),
            hamiltonian: h,
            jumps: vec![(c.jump(), 1.0)],
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(Operator, f64)] {
        &self.jumps
    }

    /// Dense Liouvillian.
    pub fn liouvillian(&self) -> SuperOperator {
        let mut gen = SuperOperator::hamiltonian(&self.hamiltonian);
        for (l, rate) in &self.jumps {
            gen = &gen + &dissipator_superop(l).scaled_real(*rate);
        }
        gen
    }

    /// Sparse Liouvillian, preferred when a truncated mode is present.
    pub fn liouvillian_sparse(&self) -> CsrMatrix {
        sparse_liouvillian(&self.hamiltonian, &self.jumps)
    }

    /// Propagates `rho0` for time `t` using the sparse Liouvillian.
    pub fn propagate(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if rho0.space() != &self.space {
            return Err(Error::DimMismatch {
                expected: self.space.total_dim(),
                found: rho0.dim(),
            });
        }
        propagate_map(&self.liouvillian_sparse(), rho0, t)
    }
}
