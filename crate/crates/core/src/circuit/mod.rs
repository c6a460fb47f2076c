// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit realisation: a damped mode mediating the coupling, the three-qubit
//! coupler built on it, and the flux tones that drive it.

mod elimination;
mod jrm;
mod rwa;
mod tones;

pub use elimination::{
    adiabatic_eliminate, build_system_bath, converged_elimination, elimination_scan,
    validate_elimination, BosonicMode, SystemBathSpec, DEFAULT_N_MAX, MAX_N_MAX,
};
pub use jrm::{
    build_jrm_effective, build_jrm_with_phases, coherent_three_body, effective_coupling_constants,
    jrm_isolation, jrm_reduced_coupling, nonreciprocity_conditions, strong_damping_condition,
    CircuitParams, EffectiveCoupling, JrmIsolation, NonreciprocityCheck, StrongDampingReport,
    DISPERSIVE_LIMIT, HIERARCHY_MARGIN, PHASE_TOL,
};
pub use rwa::{PhaseSource, SlowDrive};
pub use tones::{
    modulation_signal, plan_coherent_tones, plan_dissipative_tones, Collision, DerivedTone,
    ModulationValue, Tone, ToneRole, ToneSet,
};
