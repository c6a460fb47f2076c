// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! TOML scenario files.

use emdyn_core::circuit::CircuitParams;
use emdyn_core::liouville::ControlPulse;
use emdyn_core::{DensityMatrix, DissipativeCoupling, HilbertSpace, Operator, Segment};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError, CliResult};
use crate::opspec::{OperatorSpec, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Simulate,
    Equivalence,
    Controllability,
    Bounds,
    CircuitValidate,
    Tones,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Task::Simulate => "simulate",
            Task::Equivalence => "equivalence",
            Task::Controllability => "controllability",
            Task::Bounds => "bounds",
            Task::CircuitValidate => "circuit-validate",
            Task::Tones => "tones",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub s1_dims: Vec<usize>,
    pub s2_dims: Vec<usize>,
    pub a: OperatorSpec,
    pub b: OperatorSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub gamma: f64,
    pub eta: f64,
    pub phi: f64,
    #[serde(default)]
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatePair {
    pub s1: StateSpec,
    pub s2: StateSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllabilitySpec {
    #[serde(default)]
    pub s1_eigenindex: usize,
    pub controls: Vec<OperatorSpec>,
    #[serde(default)]
    pub random_dims: Vec<usize>,
    #[serde(default)]
    pub random_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub hamiltonians: Vec<OperatorSpec>,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificationSpec {
    pub dims: Vec<usize>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub psi0: StateSpec,
    pub t: f64,
    #[serde(default)]
    pub s1_eigenindex: usize,
    /// Defaults to the strong-damping image of `psi0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertificationSpec>,
}

fn default_threshold() -> f64 {
    1e-2
}

fn default_s1() -> StateSpec {
    StateSpec::Label("0".into())
}

fn default_s23() -> StateSpec {
    StateSpec::Label("0+".into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    /// Nonreciprocity phase; `φ₂ = φ₁ + π + φ`.
    pub phi: f64,
    #[serde(default)]
    pub phi1: f64,
    pub t: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_s1")]
    pub s1: StateSpec,
    #[serde(default = "default_s23")]
    pub s23: StateSpec,
    /// Extra mode dampings at which the isolation check is repeated.
    #[serde(default)]
    pub gamma_z_scan: Vec<f64>,
    pub params: CircuitParams,
}

fn default_collision_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TonesSpec {
    pub omega: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_z: Option<f64>,
    #[serde(default)]
    pub phi_x: f64,
    #[serde(default)]
    pub phi_y: [f64; 3],
    #[serde(default)]
    pub coherent: bool,
    #[serde(default)]
    pub transitions: Vec<f64>,
    #[serde(default = "default_collision_tol")]
    pub collision_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StatePair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controllability: Option<ControllabilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tones: Option<TonesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> CliResult<Scenario> {
    let s: Scenario =
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string().trim_end().to_string()))?;
    s.validate()?;
    Ok(s)
}

/// Normalized TOML rendering; `parse_scenario(&emit_scenario(s)) == s`.
pub fn emit_scenario(s: &Scenario) -> CliResult<String> {
    toml::to_string(s).map_err(|e| CliError::Validation(format!("cannot serialize scenario: {e}")))
}

fn require<'a, T>(v: &'a Option<T>, section: &str, task: Task) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| CliError::Validation(format!("task `{task}` needs a [{section}] section")))
}

fn check_times(ts: &[f64], what: &str) -> CliResult<()> {
    if ts.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(CliError::Validation(format!(
            "{what} must be finite and non-negative"
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn validate(&self) -> CliResult<()> {
        match self.task {
            Task::Simulate => {
                self.states()?;
                let sweep = require(&self.sweep, "sweep", self.task)?;
                if sweep.times.is_empty() {
                    return Err(CliError::Validation("simulate needs sweep.times".into()));
                }
                check_times(&sweep.times, "sweep.times")?;
            }
            Task::Equivalence => {
                self.states()?;
                let sweep = require(&self.sweep, "sweep", self.task)?;
                if sweep.times.is_empty() || sweep.gammas.is_empty() {
                    return Err(CliError::Validation(
                        "equivalence needs sweep.gammas and sweep.times".into(),
                    ));
                }
                if sweep.gammas.iter().any(|g| !(*g > 0.0)) {
                    return Err(CliError::Validation("sweep.gammas must be positive".into()));
                }
                check_times(&sweep.times, "sweep.times")?;
            }
            Task::Controllability => {
                self.coupling()?;
                self.controls()?;
            }
            Task::Bounds => {
                self.bounds_inputs()?;
            }
            Task::CircuitValidate => {
                let c = require(&self.circuit, "circuit", self.task)?;
                c.params.validate().map_err(invalid("circuit.params"))?;
                c.params
                    .check_dispersive()
                    .map_err(invalid("circuit.params"))?;
                check_times(&[c.t], "circuit.t")?;
                if c.gamma_z_scan.iter().any(|g| !(*g > 0.0)) {
                    return Err(CliError::Validation(
                        "circuit.gamma_z_scan must be positive".into(),
                    ));
                }
                c.s1.density(&HilbertSpace::single(2))
                    .map_err(CliError::Validation)?;
                c.s23
                    .density(&HilbertSpace::qubits(2))
                    .map_err(CliError::Validation)?;
            }
            Task::Tones => {
                let t = require(&self.tones, "tones", self.task)?;
                if !t.coherent && t.omega_z.is_none() {
                    return Err(CliError::Validation(
                        "dissipative tone plan needs tones.omega_z".into(),
                    ));
                }
            }
        }
        if let Some(Format::Csv) = self.output.as_ref().and_then(|o| o.format) {
            if !matches!(self.task, Task::Simulate | Task::Equivalence) {
                return Err(CliError::Validation(format!(
                    "task `{}` only writes JSON reports",
                    self.task
                )));
            }
        }
        Ok(())
    }

    pub fn coupling(&self) -> CliResult<DissipativeCoupling> {
        let sys = require(&self.system, "system", self.task)?;
        let c = require(&self.coupling, "coupling", self.task)?;
        let s1 = HilbertSpace::new(sys.s1_dims.clone()).map_err(invalid("system.s1_dims"))?;
        let s2 = HilbertSpace::new(sys.s2_dims.clone()).map_err(invalid("system.s2_dims"))?;
        let a = sys
            .a
            .resolve(&s1)
            .map_err(|e| CliError::Validation(format!("system.a: {e}")))?;
        let b = sys
            .b
            .resolve(&s2)
            .map_err(|e| CliError::Validation(format!("system.b: {e}")))?;
        if !(c.gamma > 0.0) {
            return Err(CliError::Validation(format!(
                "coupling.gamma = {} must be positive",
                c.gamma
            )));
        }
        DissipativeCoupling::new(a, b, c.gamma, c.eta, c.phi, c.g).map_err(invalid("coupling"))
    }

    pub fn states(&self) -> CliResult<(DissipativeCoupling, DensityMatrix, DensityMatrix)> {
        let c = self.coupling()?;
        let st = require(&self.state, "state", self.task)?;
        let r1 = st
            .s1
            .density(c.s1_space())
            .map_err(|e| CliError::Validation(format!("state.s1: {e}")))?;
        let r2 = st
            .s2
            .density(c.s2_space())
            .map_err(|e| CliError::Validation(format!("state.s2: {e}")))?;
        Ok((c, r1, r2))
    }

    pub fn controls(&self) -> CliResult<Vec<Operator>> {
        let spec = require(&self.controllability, "controllability", self.task)?;
        let sys = require(&self.system, "system", self.task)?;
        let s2 = HilbertSpace::new(sys.s2_dims.clone()).map_err(invalid("system.s2_dims"))?;
        if spec.controls.is_empty() {
            return Err(CliError::Validation(
                "controllability.controls is empty".into(),
            ));
        }
        spec.controls
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.resolve(&s2)
                    .map_err(|e| CliError::Validation(format!("controls[{i}]: {e}")))
            })
            .collect()
    }

    pub fn pulse(&self) -> CliResult<Option<ControlPulse>> {
        let b = require(&self.bounds, "bounds", self.task)?;
        let Some(p) = &b.pulse else { return Ok(None) };
        let sys = require(&self.system, "system", self.task)?;
        let s2 = HilbertSpace::new(sys.s2_dims.clone()).map_err(invalid("system.s2_dims"))?;
        let hs = p
            .hamiltonians
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.resolve(&s2)
                    .map_err(|e| CliError::Validation(format!("pulse.hamiltonians[{i}]: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        ControlPulse::new(hs, p.segments.clone())
            .map(Some)
            .map_err(invalid("bounds.pulse"))
    }

    pub fn bounds_inputs(&self) -> CliResult<emdyn_core::bounds::GateTask> {
        use emdyn_core::bounds::GateTask;
        let c = self.coupling()?;
        let b = require(&self.bounds, "bounds", self.task)?;
        check_times(&[b.t], "bounds.t")?;
        let d2 = c.s2_space().total_dim();
        let psi0 = b
            .psi0
            .pure_vector(d2)
            .map_err(|e| CliError::Validation(format!("bounds.psi0: {e}")))?;
        let pulse = self.pulse()?;
        if let Some(p) = &pulse {
            if (p.total_duration() - b.t).abs() > 1e-12 * b.t.max(1.0) {
                return Err(CliError::Validation(format!(
                    "pulse duration {} differs from bounds.t = {}",
                    p.total_duration(),
                    b.t
                )));
            }
        }
        if let Some(cert) = &b.certification {
            if cert.dims.iter().any(|d| *d < 2) {
                return Err(CliError::Validation(
                    "certification dims must be at least 2".into(),
                ));
            }
        }
        let task = match &b.target {
            None => GateTask::with_limit_target(c, psi0, b.t, pulse, b.s1_eigenindex),
            Some(t) => {
                let target = t
                    .pure_vector(d2)
                    .map_err(|e| CliError::Validation(format!("bounds.target: {e}")))?;
                GateTask::new(c, psi0, target, b.t, pulse, b.s1_eigenindex)
            }
        };
        task.map_err(invalid("bounds"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "two-qubit equivalence"
task = "equivalence"

[system]
s1_dims = [2]
s2_dims = [2]
a = "Z"
b = "X"

[coupling]
gamma = 10.0
eta = 1.0
phi = 1.5707963267948966

[state]
s1 = "0"
s2 = "0"

[sweep]
gammas = [10.0, 100.0]
times = [1.0]
"#;

    #[test]
    fn minimal_round_trip() {
        let s = parse_scenario(MINIMAL).unwrap();
        let text = emit_scenario(&s).unwrap();
        assert_eq!(parse_scenario(&text).unwrap(), s);
    }

    #[test]
    fn misspelled_task_lists_valid_names() {
        let text = MINIMAL.replace("\"equivalence\"", "\"equivalance\"");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(
            msg.contains("circuit-validate") && msg.contains("line"),
            "{msg}"
        );
    }

    #[test]
    fn non_positive_rate_is_rejected() {
        let text = MINIMAL.replace("gamma = 10.0", "gamma = -1.0");
        assert!(matches!(
            parse_scenario(&text),
            Err(CliError::Validation(_))
        ));
        let text = MINIMAL.replace("a = \"Z\"", "a = { re = [[0.0, 1.0], [0.0, 0.0]] }");
        assert!(matches!(
            parse_scenario(&text),
            Err(CliError::Validation(_))
        ));
    }
}
