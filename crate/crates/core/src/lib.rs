// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense open-system toolkit for dissipatively coupled subsystems.
//!
//! Two finite-dimensional systems S1 and S2 are coupled coherently through
//! `H = g A₁B₂` and dissipatively through the non-local jump operator
//! `L = √γ (A₁ − (η/γ) e^{iφ} B₂)`. For strong damping the S2 marginal evolves
//! under a mixture of unitaries generated by `B`. The crate provides:
//!
//! * [`opcore`]: operators on composite spaces, spectral decompositions,
//!   matrix exponentials, partial traces and row-vectorized superoperators;
//! * [`liouville`]: the full, reduced and cascaded generators and their
//!   propagation, including piecewise-constant control pulses;
//! * [`emergent`]: the strong-damping unitary mixture and finite-γ gaps;
//! * [`control`]: dynamical Lie algebra closures and controllability;
//! * [`bounds`]: fidelity-error formulas, thresholds and certification;
//! * [`circuit`]: adiabatic elimination of a damped mode, the Josephson ring
//!   modulator effective model and pump-tone planning.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod circuit;
pub mod control;
pub mod emergent;
pub mod error;
pub mod fit;
pub mod liouville;
pub mod opcore;
pub mod random;

pub use error::{Error, Result};
pub use liouville::{ControlPulse, DissipativeCoupling, MasterEquation, Segment};
pub use opcore::{
    dissipator_superop, expm, herm_eig, hs_inner, partial_trace, tensor, trace_distance, CMatrix,
    CVector, DensityMatrix, HilbertSpace, Operator, SpectralDecomposition, SuperOperator, C64,
};

/// Crate version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
