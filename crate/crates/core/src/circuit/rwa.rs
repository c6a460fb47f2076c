// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Explicitly modulated interaction-frame Hamiltonian and its rotating-wave limit.
//!
//! Conventions: `σ⁺(t) = σ⁺ e^{iΩt}`, `d(t) = d e^{−iω_z t}`. A derived tone
//! carrying phase `ϕ` then yields the quadrature `X_{−ϕ}` in the resonant terms.

use serde::{Deserialize, Serialize};

use super::jrm::CircuitParams;
use super::tones::ToneSet;
use crate::error::{Error, Result};
use crate::opcore::boson::annihilation;
use crate::opcore::pauli::{sigma_minus, sigma_plus};
use crate::opcore::{expm, tensor, CMatrix, CVector, HilbertSpace, Operator, C64};

/// Which phase each derived tone is synthesised with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSource {
    /// Phase produced by multiplying the x and y signals.
    Signal,
    /// Phase label `φ_{y,m} ± φ_x` applied directly to each derived tone.
    Label,
}

/// `H(t) = Σ_k e^{iν_k t} O_k`
#[derive(Debug, Clone)]
pub struct SlowDrive {
    space: HilbertSpace,
    terms: Vec<(f64, CMatrix)>,
    scale: f64,
}

impl SlowDrive {
    /// Expands `−Λ M(t) (d e^{−iω_z t} + h.c.)(λ₁z σ₁ˣ(t) + β σ₂ˣ(t)σ₃ˣ(t))`
    /// with `M(t) = Σ_d ½ cos(ω_d t + ϕ_d)` over the derived tones.
    pub fn new(params: &CircuitParams, tones: &ToneSet, source: PhaseSource) -> Result<Self> {
        let eff = params.effective()?;
        let n_max = params.mode.n_max;
        let q = HilbertSpace::single(2);
        let i2 = Operator::identity(&q);
        let im = Operator::identity(&params.mode.space());
        let d = annihilation(n_max);
        let [w1, w2, w3] = params.omega;
        let wz = params.mode.omega_z;

        let on =
            |q1: &Operator, q2: &Operator, q3: &Operator, m: &Operator| tensor(&[q1, q2, q3, m]);
        let (sp, sm) = (sigma_plus(), sigma_minus());
        let mut system: Vec<(f64, Operator)> = vec![
            (w1, on(&sp, &i2, &i2, &im).scaled_real(params.lambda_z[0])),
            (-w1, on(&sm, &i2, &i2, &im).scaled_real(params.lambda_z[0])),
        ];
        for (s2, o2) in [(1.0, &sp), (-1.0, &sm)] {
            for (s3, o3) in [(1.0, &sp), (-1.0, &sm)] {
                system.push((
                    s2 * w2 + s3 * w3,
                    on(&i2, o2, o3, &im).scaled_real(eff.beta),
                ));
            }
        }
        let mode = [
            (-wz, on(&i2, &i2, &i2, &d)),
            (wz, on(&i2, &i2, &i2, &d.dagger())),
        ];
        let mut modulation = Vec::with_capacity(2 * tones.derived.len());
        for t in &tones.derived {
            let phase = match source {
                PhaseSource::Signal => t.signal_phase,
                PhaseSource::Label => t.phase,
            };
            modulation.push((t.frequency, C64::from_polar(0.25, phase)));
            modulation.push((-t.frequency, C64::from_polar(0.25, -phase)));
        }

        let scale = wz
            + 2.0 * params.omega.iter().fold(0.0f64, |a, w| a.max(*w))
            + tones.derived.iter().fold(0.0f64, |a, t| a.max(t.frequency));
        let tol = 1e-9 * scale;
        let mut terms: Vec<(f64, CMatrix)> = Vec::new();
        for (nm, cm) in &modulation {
            for (nd, od) in &mode {
                let md = od.scaled(cm * -eff.lambda);
                for (ns, os) in &system {
                    let nu = nm + nd + ns;
                    let op = (&md * os).into_matrix();
                    match terms.iter_mut().find(|(k, _)| (k - nu).abs() <= tol) {
                        Some((_, acc)) => *acc += op,
                        None => terms.push((nu, op)),
                    }
                }
            }
        }
        terms.retain(|(_, m)| m.camax() > 0.0);
        Ok(Self {
            space: HilbertSpace::new(vec![2, 2, 2, n_max + 1])?,
            terms,
            scale,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    /// Number of distinct frequency components.
    pub fn num_components(&self) -> usize {
        self.terms.len()
    }

    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        let dim = self.space.total_dim();
        let mut h = CMatrix::zeros(dim, dim);
        for (nu, op) in &self.terms {
            h += op * C64::from_polar(1.0, nu * t);
        }
        h
    }

    /// Sum of the zero-frequency components.
    pub fn rwa_hamiltonian(&self) -> Result<Operator> {
        let dim = self.space.total_dim();
        let mut h = CMatrix::zeros(dim, dim);
        for (nu, op) in &self.terms {
            if nu.abs() <= 1e-9 * self.scale {
                h += op;
            }
        }
        let h = Operator::new(self.space.clone(), h)?;
        h.ensure_hermitian(1e-10)?;
        Ok(h)
    }

    /// Fourth-order Runge-Kutta integration of `iψ̇ = H(t)ψ`.
    pub fn evolve(&self, psi0: &CVector, t: f64, steps: usize) -> Result<CVector> {
        if psi0.len() != self.space.total_dim() {
            return Err(Error::DimMismatch {
                expected: self.space.total_dim(),
                found: psi0.len(),
            });
        }
        if steps == 0 || !(t >= 0.0) {
            return Err(Error::InvalidParameter(
                "need t >= 0 and at least one step".into(),
            ));
        }
        let minus_i = C64::new(0.0, -1.0);
        let rhs = |s: f64, y: &CVector| self.hamiltonian_at(s) * y * minus_i;
        let dt = t / steps as f64;
        let mut y = psi0.clone();
        for k in 0..steps {
            let s = k as f64 * dt;
            let k1 = rhs(s, &y);
            let k2 = rhs(s + dt / 2.0, &(&y + &k1 * C64::from(dt / 2.0)));
            let k3 = rhs(s + dt / 2.0, &(&y + &k2 * C64::from(dt / 2.0)));
            let k4 = rhs(s + dt, &(&y + &k3 * C64::from(dt)));
            y += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(dt / 6.0);
        }
        Ok(y)
    }

    /// `‖ψ(t) − e^{−iH_RWA t}ψ₀‖` with `steps` RK4 steps for the driven evolution.
    pub fn rwa_deviation(&self, psi0: &CVector, t: f64, steps: usize) -> Result<f64> {
        let driven = self.evolve(psi0, t, steps)?;
        let u = expm(&self.rwa_hamiltonian()?, C64::new(0.0, -t));
        Ok((driven - u.apply(psi0)).norm())
    }
}
