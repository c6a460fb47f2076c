// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-γ fidelity errors for state preparation on S2.
//!
//! Rates use the factored convention in which `η` multiplies an unscaled `B`.
//! [`absorb_eta`] and [`factor_eta`] convert to and from the convention in
//! which `η` is folded into `B`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{
    build_full_generator, propagate, propagate_controlled, ControlPulse, DissipativeCoupling,
    Segment,
};
use crate::opcore::superop::{devectorize, vectorize};
use crate::opcore::{
    dissipator_superop, expm, expm_dense, herm_eig, CMatrix, CVector, DensityMatrix, Operator,
    SuperOperator, C64,
};
use crate::random::{random_hermitian, random_pure_state, stream_rng};

/// Tolerance on state normalization.
pub const NORM_TOL: f64 = 1e-12;
/// Default factor by which `γ` must exceed the threshold.
pub const DEFAULT_MARGIN: f64 = 100.0;

/// Prepare `target` on S2 from `psi0` in time `t`, with S1 initialised in the
/// `s1_eigenindex`-th eigenspace of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateTask {
    coupling: DissipativeCoupling,
    psi0: CVector,
    target: CVector,
    t: f64,
    pulse: Option<ControlPulse>,
    s1_eigenindex: usize,
}

fn check_normalized(v: &CVector, d: usize, what: &str) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: v.len(),
        });
    }
    let n = v.norm();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("{what} has norm {n}")));
    }
    Ok(())
}

impl GateTask {
    pub fn new(
        coupling: DissipativeCoupling,
        psi0: CVector,
        target: CVector,
        t: f64,
        pulse: Option<ControlPulse>,
        s1_eigenindex: usize,
    ) -> Result<Self> {
        let d = coupling.b().dim();
        check_normalized(&psi0, d, "initial state")?;
        check_normalized(&target, d, "target state")?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "duration must be non-negative, got {t}"
            )));
        }
        if let Some(p) = &pulse {
            if (p.total_duration() - t).abs() > 1e-12 * t.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "pulse lasts {} but the task lasts {t}",
                    p.total_duration()
                )));
            }
            if let Some(h) = p.hamiltonians().first() {
                if h.space() != coupling.s2_space() {
                    return Err(Error::DimMismatch {
                        expected: d,
                        found: h.dim(),
                    });
                }
            }
        }
        let count = herm_eig(coupling.a())?.len();
        if s1_eigenindex >= count {
            return Err(Error::BadEigenindex {
                index: s1_eigenindex,
                count,
            });
        }
        Ok(Self {
            coupling,
            psi0,
            target,
            t,
            pulse,
            s1_eigenindex,
        })
    }

    /// Task whose target is the strong-damping image of `psi0`.
    pub fn with_limit_target(
        coupling: DissipativeCoupling,
        psi0: CVector,
        t: f64,
        pulse: Option<ControlPulse>,
        s1_eigenindex: usize,
    ) -> Result<Self> {
        let mut task = Self::new(coupling, psi0.clone(), psi0, t, pulse, s1_eigenindex)?;
        let target = task.limit_unitary()?.apply(&task.psi0);
        task.target = &target / C64::new(target.norm(), 0.0);
        Ok(task)
    }

    pub fn coupling(&self) -> &DissipativeCoupling {
        &self.coupling
    }

    pub fn psi0(&self) -> &CVector {
        &self.psi0
    }

    pub fn target(&self) -> &CVector {
        &self.target
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn pulse(&self) -> Option<&ControlPulse> {
        self.pulse.as_ref()
    }

    pub fn s1_eigenindex(&self) -> usize {
        self.s1_eigenindex
    }

    /// `λ_a`, the eigenvalue of `A` selected for S1.
    pub fn lambda_a(&self) -> Result<f64> {
        Ok(herm_eig(self.coupling.a())?.eigenvalues[self.s1_eigenindex])
    }

    /// A normalized eigenvector of `A` with eigenvalue `λ_a`.
    pub fn s1_eigenstate(&self) -> Result<CVector> {
        Ok(herm_eig(self.coupling.a())?.eigenvectors[self.s1_eigenindex][0].clone())
    }

    /// Strong-damping propagator on S2: the time-ordered product of
    /// `exp(−iτ(λ_a(g + η sin φ)B + H_seg))` over the pulse segments.
    pub fn limit_unitary(&self) -> Result<Operator> {
        let drift = self
            .coupling
            .b()
            .scaled_real(self.lambda_a()? * self.coupling.s2_coefficient());
        let minus_i = C64::new(0.0, -1.0);
        match &self.pulse {
            None => Ok(expm(&drift, minus_i * self.t)),
            Some(p) => {
                let mut u = Operator::identity(self.coupling.s2_space());
                for (k, seg) in p.segments().iter().enumerate() {
                    let h = match p.segment_hamiltonian(k) {
                        Some(h) => &drift + &h,
                        None => drift.clone(),
                    };
                    u = &expm(&h, minus_i * seg.duration) * &u;
                }
                Ok(u)
            }
        }
    }

    fn initial_state(&self) -> Result<DensityMatrix> {
        let a = DensityMatrix::pure(self.coupling.s1_space(), &self.s1_eigenstate()?)?;
        let b = DensityMatrix::pure(self.coupling.s2_space(), &self.psi0)?;
        Ok(a.tensor(&b))
    }
}

/// Closed-form error `1 − Σ_{n,m} w_n w_m exp(−(tη²/2γ)(λ_n − λ_m)²)` with
/// `w_n` the weight of the target in the `n`-th eigenspace of `B`.
pub fn exact_error_commuting(task: &GateTask) -> Result<f64> {
    if task.pulse.is_some() {
        return Err(Error::RequiresNoPulse);
    }
    let c = &task.coupling;
    let spec = herm_eig(c.b())?;
    let w = spec.weights(&task.target);
    let rate = task.t * c.eta() * c.eta() / (2.0 * c.gamma());
    let mut f = 0.0;
    for (ln, wn) in spec.eigenvalues.iter().zip(&w) {
        for (lm, wm) in spec.eigenvalues.iter().zip(&w) {
            f += wn * wm * (-rate * (ln - lm).powi(2)).exp();
        }
    }
    Ok((1.0 - f).clamp(0.0, 1.0))
}

/// `margin · η² · (t/2) · max_{n≠m}(λ_n − λ_m)²`
pub fn gamma_threshold(task: &GateTask, margin: f64) -> Result<f64> {
    let spread = herm_eig(task.coupling.b())?.spread();
    let eta = task.coupling.eta();
    Ok(margin * eta * eta * 0.5 * task.t * spread * spread)
}

/// `(tη²/2γ)(‖B‖∞² + ‖B²‖∞)`
pub fn error_upper_bound(task: &GateTask) -> f64 {
    let c = &task.coupling;
    let b = c.b();
    let nb = b.op_norm();
    let nb2 = (b * b).op_norm();
    task.t * c.eta() * c.eta() / (2.0 * c.gamma()) * (nb * nb + nb2)
}

/// Bound with `η` folded into `B`: `(t/2γ)(‖B̃‖∞² + ‖B̃²‖∞)`.
pub fn error_upper_bound_absorbed(b_absorbed: &Operator, gamma: f64, t: f64) -> f64 {
    let nb = b_absorbed.op_norm();
    t / (2.0 * gamma) * (nb * nb + (b_absorbed * b_absorbed).op_norm())
}

/// `B̃ = ηB`
pub fn absorb_eta(b: &Operator, eta: f64) -> Operator {
    b.scaled_real(eta)
}

/// `B = B̃/η`
pub fn factor_eta(b_absorbed: &Operator, eta: f64) -> Result<Operator> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive to factor it out, got {eta}"
        )));
    }
    Ok(b_absorbed.scaled_real(1.0 / eta))
}

/// S2 marginal of the full finite-γ propagation, pulse included.
pub fn finite_gamma_marginal(task: &GateTask) -> Result<DensityMatrix> {
    let c = &task.coupling;
    let rho0 = task.initial_state()?;
    let out = match &task.pulse {
        Some(p) => propagate_controlled(c, p, &rho0)?,
        None => propagate(&build_full_generator(c, true), &rho0, task.t)?,
    };
    out.partial_trace(&c.s2_factors())
}

/// `1 − ⟨ψ_G|ρ₂(t)|ψ_G⟩` from full propagation.
pub fn empirical_error(task: &GateTask) -> Result<f64> {
    let rho2 = finite_gamma_marginal(task)?;
    Ok(1.0 - rho2.fidelity_with_pure(&task.target))
}

/// Substeps per pulse segment for the rotated-frame integrator.
const FRAME_SUBSTEPS: usize = 64;

/// S2 marginal computed in the frame rotating with the pulse.
///
/// The rotated generator `𝒟[L(t)] − i[g A₁B₂(t), ·]` with `B₂(t) = V†B₂V` is
/// integrated with a fourth-order Magnus scheme on Gauss points, then rotated
/// back with `V(t)`.
pub fn rotated_frame_marginal(task: &GateTask) -> Result<DensityMatrix> {
    let c = &task.coupling;
    let rho0 = task.initial_state()?;
    let d2 = c.b().dim();
    let zero_pulse;
    let pulse = match &task.pulse {
        Some(p) => p,
        None => {
            zero_pulse = ControlPulse::idle(c.s2_space(), task.t.max(f64::MIN_POSITIVE))?;
            &zero_pulse
        }
    };
    let a1 = c.a1();
    let ratio = C64::from_polar(c.eta() / c.gamma(), c.phi());
    let sqrt_gamma = c.gamma().sqrt();
    let generator_at = |v: &Operator| -> Result<SuperOperator> {
        let bt = c.lift_s2(&(&(&v.dagger() * c.b()) * v))?;
        let l = (&a1 - &bt.scaled(ratio)).scaled_real(sqrt_gamma);
        let h = (&a1 * &bt).scaled_real(c.g());
        Ok(&dissipator_superop(&l) + &SuperOperator::hamiltonian(&h))
    };

    let gauss = 0.5 - 3f64.sqrt() / 6.0;
    let minus_i = C64::new(0.0, -1.0);
    let mut v_start = Operator::identity(c.s2_space());
    let mut state = vectorize(rho0.matrix());
    for (k, seg) in pulse.segments().iter().enumerate() {
        let h = pulse
            .segment_hamiltonian(k)
            .unwrap_or_else(|| Operator::zeros(c.s2_space()));
        let dt = seg.duration / FRAME_SUBSTEPS as f64;
        let v_at = |tau: f64| &expm(&h, minus_i * tau) * &v_start;
        for n in 0..FRAME_SUBSTEPS {
            let t0 = n as f64 * dt;
            let g1 = generator_at(&v_at(t0 + gauss * dt))?;
            let g2 = generator_at(&v_at(t0 + (1.0 - gauss) * dt))?;
            let comm = g2.matrix() * g1.matrix() - g1.matrix() * g2.matrix();
            let omega = (g1.matrix() + g2.matrix()) * C64::new(0.5 * dt, 0.0)
                + comm * C64::new(3f64.sqrt() / 12.0 * dt * dt, 0.0);
            state = expm_dense(&omega) * state;
        }
        v_start = v_at(seg.duration);
    }
    let dim = rho0.dim();
    let rho_rot = devectorize(&state, dim);
    let v_full = c.lift_s2(&v_start)?;
    let lab = v_full.matrix() * rho_rot * v_full.matrix().adjoint();
    let lab = crate::liouville::finalize_state(rho0.space(), lab)?;
    let out = lab.partial_trace(&c.s2_factors())?;
    debug_assert_eq!(out.dim(), d2);
    Ok(out)
}

/// One sample of the randomized certification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationOutcome {
    pub index: usize,
    pub d: usize,
    pub gamma: f64,
    pub eta: f64,
    pub t: f64,
    pub segments: usize,
    pub empirical: f64,
    pub bound: f64,
}

impl CertificationOutcome {
    /// `empirical ≤ bound + slack`
    pub fn holds(&self, slack: f64) -> bool {
        self.empirical <= self.bound + slack
    }
}

/// Random pulsed task on S1 = qubit, S2 = `C^d`, drawn from `rng`.
pub fn random_pulsed_task<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<GateTask> {
    let a = random_hermitian(2, rng);
    let b = random_hermitian(d, rng);
    let b = b.scaled_real(1.0 / b.op_norm());
    let eta = rng.random_range(0.5..1.5);
    let gamma = eta * rng.random_range(2.0..40.0);
    let c = DissipativeCoupling::new(a, b, gamma, eta, std::f64::consts::FRAC_PI_2, 0.0)?;
    let controls = vec![random_hermitian(d, rng), random_hermitian(d, rng)];
    let n_seg = rng.random_range(1..=3);
    let segments: Vec<Segment> = (0..n_seg)
        .map(|_| Segment {
            duration: rng.random_range(0.1..0.5),
            coefficients: vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
        })
        .collect();
    let pulse = ControlPulse::new(controls, segments)?;
    let t = pulse.total_duration();
    let psi0 = random_pure_state(d, rng);
    let index = rng.random_range(0..herm_eig(c.a())?.len());
    GateTask::with_limit_target(c, psi0, t, Some(pulse), index)
}

/// Runs `samples` random pulsed tasks per dimension in `dims`. Sample `k` uses
/// stream `k` of `seed`; results are ordered by index.
pub fn certification_suite(
    dims: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<CertificationOutcome>> {
    let jobs: Vec<(usize, usize)> = dims
        .iter()
        .flat_map(|&d| (0..samples).map(move |k| (d, k)))
        .enumerate()
        .map(|(i, (d, _))| (i, d))
        .collect();
    jobs.par_iter()
        .map(|&(index, d)| {
            let mut rng = stream_rng(seed, index as u64);
            let task = random_pulsed_task(d, &mut rng)?;
            Ok(CertificationOutcome {
                index,
                d,
                gamma: task.coupling.gamma(),
                eta: task.coupling.eta(),
                t: task.t,
                segments: task.pulse.as_ref().map_or(0, |p| p.segments().len()),
                empirical: empirical_error(&task)?,
                bound: error_upper_bound(&task),
            })
        })
        .collect()
}

/// `½‖ρ₂ − |ψ_G⟩⟨ψ_G|‖₁`, an upper bound on the fidelity error.
pub fn target_distance(rho2: &DensityMatrix, target: &CVector) -> Result<f64> {
    let proj: CMatrix = target * target.adjoint();
    crate::opcore::density::trace_distance_matrices(rho2.matrix(), &proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::operator::{ONE, ZERO};
    use crate::opcore::pauli::{identity2, sigma_x, sigma_z};
    use crate::random::seeded_rng;
    use std::f64::consts::FRAC_PI_2;

    fn plus() -> CVector {
        CVector::from_vec(vec![ONE, ONE]) / C64::new(2f64.sqrt(), 0.0)
    }

    fn zero() -> CVector {
        CVector::from_vec(vec![ONE, ZERO])
    }

    fn task(gamma: f64, t: f64, psi0: CVector) -> GateTask {
        let c = DissipativeCoupling::new(sigma_z(), sigma_z(), gamma, 1.0, FRAC_PI_2, 0.0).unwrap();
        GateTask::with_limit_target(c, psi0, t, None, 1).unwrap()
    }

    #[test]
    fn eigenstate_target_has_no_error() {
        let t = task(3.0, 2.0, zero());
        assert!(exact_error_commuting(&t).unwrap() < 1e-15);
        assert!(empirical_error(&t).unwrap() < 1e-10);
        let t0 = task(3.0, 0.0, plus());
        assert!(exact_error_commuting(&t0).unwrap() < 1e-15);
    }

    #[test]
    fn equal_superposition_closed_form() {
        for (gamma, t) in [(5.0, 1.0), (20.0, 0.5), (2.0, 3.0)] {
            let task = task(gamma, t, plus());
            let x = t / gamma;
            let closed = 0.5 * (1.0 - (-2.0 * x).exp());
            let exact = exact_error_commuting(&task).unwrap();
            assert!((exact - closed).abs() < 1e-14);
            assert!((empirical_error(&task).unwrap() - exact).abs() < 1e-8);
            assert!(error_upper_bound(&task) >= exact);
            assert!((error_upper_bound(&task) - x).abs() < 1e-14);
        }
    }

    #[test]
    fn pulsed_task_rejects_closed_form() {
        let c = DissipativeCoupling::new(sigma_z(), sigma_z(), 3.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        let pulse = ControlPulse::new(
            vec![sigma_x()],
            vec![Segment {
                duration: 1.0,
                coefficients: vec![0.3],
            }],
        )
        .unwrap();
        let t =
            GateTask::with_limit_target(c.clone(), plus(), 1.0, Some(pulse.clone()), 0).unwrap();
        assert_eq!(exact_error_commuting(&t), Err(Error::RequiresNoPulse));
        assert!(GateTask::with_limit_target(c, plus(), 2.0, Some(pulse), 0).is_err());
    }

    #[test]
    fn threshold_examples() {
        let t1 = task(10.0, 1.0, plus());
        assert!((gamma_threshold(&t1, DEFAULT_MARGIN).unwrap() - 200.0).abs() < 1e-12);
        let t2 = task(10.0, 2.0, plus());
        assert!((gamma_threshold(&t2, DEFAULT_MARGIN).unwrap() - 400.0).abs() < 1e-12);
        let c =
            DissipativeCoupling::new(sigma_z(), identity2(), 10.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        let flat = GateTask::with_limit_target(c, plus(), 1.0, None, 0).unwrap();
        assert_eq!(gamma_threshold(&flat, DEFAULT_MARGIN).unwrap(), 0.0);
    }

    #[test]
    fn bound_examples() {
        assert!((error_upper_bound(&task(10.0, 1.0, plus())) - 0.1).abs() < 1e-14);
        assert!(error_upper_bound(&task(1e12, 1.0, plus())) < 1e-11);
        let b = sigma_x().scaled_real(0.7);
        let bt = absorb_eta(&b, 1.3);
        let c = DissipativeCoupling::new(sigma_z(), b.clone(), 4.0, 1.3, FRAC_PI_2, 0.0).unwrap();
        let tk = GateTask::with_limit_target(c, plus(), 0.8, None, 0).unwrap();
        assert!((error_upper_bound_absorbed(&bt, 4.0, 0.8) - error_upper_bound(&tk)).abs() < 1e-15);
        assert!((factor_eta(&bt, 1.3).unwrap().matrix() - b.matrix()).camax() < 1e-15);
    }

    #[test]
    fn error_monotonicity() {
        let e: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&t| exact_error_commuting(&task(10.0, t, plus())).unwrap())
            .collect();
        assert!(e.windows(2).all(|w| w[1] >= w[0]));
        let e: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&g| exact_error_commuting(&task(g, 1.0, plus())).unwrap())
            .collect();
        assert!(e.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn very_strong_damping() {
        let c = DissipativeCoupling::new(sigma_z(), sigma_x(), 1e6, 1.0, FRAC_PI_2, 0.0).unwrap();
        let t = GateTask::with_limit_target(c, zero(), 1.0, None, 1).unwrap();
        assert!(empirical_error(&t).unwrap() < 1e-4);
    }

    #[test]
    fn rotated_frame_agrees_with_lab_frame() {
        let mut rng = seeded_rng(80);
        for d in [2, 4] {
            let task = random_pulsed_task(d, &mut rng).unwrap();
            let lab = finite_gamma_marginal(&task).unwrap();
            let rot = rotated_frame_marginal(&task).unwrap();
            assert!((lab.matrix() - rot.matrix()).camax() < 1e-8);
        }
    }

    #[test]
    fn small_certification_run() {
        let outcomes = certification_suite(&[2, 4], 5, 3).unwrap();
        assert_eq!(outcomes.len(), 10);
        assert!(outcomes.iter().enumerate().all(|(i, o)| o.index == i));
        assert!(outcomes.iter().all(|o| o.holds(1e-9)));
        let again = certification_suite(&[2, 4], 5, 3).unwrap();
        assert_eq!(outcomes, again);
    }
}
