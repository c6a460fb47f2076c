// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use emdyn_core::bounds::{
    certification_suite, empirical_error, error_upper_bound, exact_error_commuting,
    gamma_threshold, CertificationOutcome, DEFAULT_MARGIN,
};
use emdyn_core::circuit::{
    effective_coupling_constants, jrm_isolation, nonreciprocity_conditions, plan_coherent_tones,
    plan_dissipative_tones, strong_damping_condition, Collision, EffectiveCoupling, JrmIsolation,
    NonreciprocityCheck, StrongDampingReport, ToneSet,
};
use emdyn_core::control::{controllability_delta, random_pair_dimensions};
use emdyn_core::emergent::gap_sweep;
use emdyn_core::fit::fit_power_law;
use emdyn_core::liouville::{build_full_generator, propagate};
use emdyn_core::{herm_eig, HilbertSpace};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{write_csv, write_json, write_manifest};
use crate::scenario::{Format, Scenario, Task};

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub margin: Option<f64>,
}

/// Files written by one run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
}

enum Report {
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<f64>>,
    },
    Json(serde_json::Value),
}

fn to_json<T: Serialize>(v: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(v)
        .map_err(|e| CliError::Validation(format!("cannot serialize report: {e}")))
}

/// Runs `task` on `scenario`; `scenario_bytes` is the raw file for the manifest hash.
pub fn run(
    task: Task,
    scenario: &Scenario,
    scenario_bytes: &[u8],
    opts: &RunOptions,
) -> CliResult<RunSummary> {
    if task != scenario.task {
        return Err(CliError::Validation(format!(
            "command task `{task}` does not match scenario task `{}`",
            scenario.task
        )));
    }
    scenario.validate()?;
    let seed = opts.seed.unwrap_or(scenario.seed);
    let margin = opts.margin.unwrap_or(DEFAULT_MARGIN);
    if !(margin > 0.0) {
        return Err(CliError::Validation(format!(
            "margin {margin} must be positive"
        )));
    }
    let out = opts
        .out
        .clone()
        .or_else(|| {
            scenario
                .output
                .as_ref()
                .and_then(|o| o.dir.as_ref())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("emdyn-out"));
    fs::create_dir_all(&out).map_err(|source| CliError::Io {
        path: out.clone(),
        source,
    })?;

    let report = match task {
        Task::Simulate => simulate(scenario)?,
        Task::Equivalence => equivalence(scenario)?,
        Task::Controllability => controllability(scenario, seed)?,
        Task::Bounds => bounds(scenario, seed, margin)?,
        Task::CircuitValidate => circuit_validate(scenario)?,
        Task::Tones => tones(scenario)?,
    };
    let format = scenario.output.as_ref().and_then(|o| o.format);
    let path = write_report(&out, report, format)?;
    let outputs = vec![path];
    let manifest = write_manifest(
        &out,
        &scenario.name,
        &task.to_string(),
        scenario_bytes,
        seed,
        margin,
        &outputs,
    )?;
    Ok(RunSummary { outputs, manifest })
}

fn write_report(dir: &Path, report: Report, format: Option<Format>) -> CliResult<PathBuf> {
    match (report, format) {
        (Report::Table { header, rows }, None | Some(Format::Csv)) => {
            let p = dir.join("results.csv");
            write_csv(&p, &header, &rows)?;
            Ok(p)
        }
        (Report::Table { header, rows }, Some(Format::Json)) => {
            let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .map(|h| h.to_string())
                        .zip(r.iter().map(|x| serde_json::json!(x)))
                        .collect()
                })
                .collect();
            let p = dir.join("report.json");
            write_json(&p, &records)?;
            Ok(p)
        }
        (Report::Json(v), _) => {
            let p = dir.join("report.json");
            write_json(&p, &v)?;
            Ok(p)
        }
    }
}

fn simulate(s: &Scenario) -> CliResult<Report> {
    let (c, r1, r2) = s.states()?;
    let rho0 = c.product_state(&r1, &r2)?;
    let gen = build_full_generator(&c, true);
    let times = &s.sweep.as_ref().expect("validated").times;
    let rows = times
        .par_iter()
        .map(|&t| {
            let rho = propagate(&gen, &rho0, t)?;
            let m1 = rho.partial_trace(&c.s1_factors())?;
            let m2 = rho.partial_trace(&c.s2_factors())?;
            Ok(vec![
                t,
                rho.trace().re,
                rho.purity(),
                m1.purity(),
                m2.purity(),
                m1.expectation(c.a()).re,
                m2.expectation(c.b()).re,
            ])
        })
        .collect::<emdyn_core::Result<Vec<_>>>()?;
    Ok(Report::Table {
        header: vec![
            "t",
            "trace",
            "purity",
            "s1_purity",
            "s2_purity",
            "a_expectation",
            "b_expectation",
        ],
        rows,
    })
}

fn equivalence(s: &Scenario) -> CliResult<Report> {
    let (c, r1, r2) = s.states()?;
    let sweep = s.sweep.as_ref().expect("validated");
    let mut rows = Vec::with_capacity(sweep.gammas.len() * sweep.times.len());
    for &t in &sweep.times {
        let gaps = gap_sweep(&c, &sweep.gammas, &r1, &r2, t)?;
        let exponent = if sweep.gammas.len() >= 2 {
            fit_power_law(&sweep.gammas, &gaps).map_or(f64::NAN, |f| f.exponent)
        } else {
            f64::NAN
        };
        rows.extend(
            sweep
                .gammas
                .iter()
                .zip(&gaps)
                .map(|(&g, &d)| vec![g, t, d, exponent]),
        );
    }
    Ok(Report::Table {
        header: vec!["gamma", "t", "trace_distance", "fitted_exponent"],
        rows,
    })
}

#[derive(Serialize)]
struct RandomPairs {
    d: usize,
    samples: usize,
    dimensions: Vec<usize>,
    all_full: bool,
}

#[derive(Serialize)]
struct ControllabilityReport {
    lambda_a: f64,
    controls_only_dimension: usize,
    with_drift_dimension: usize,
    full_dimension: usize,
    fully_controllable: bool,
    random_pairs: Vec<RandomPairs>,
}

fn controllability(s: &Scenario, seed: u64) -> CliResult<Report> {
    let c = s.coupling()?;
    let controls = s.controls()?;
    let spec = s.controllability.as_ref().expect("validated");
    let eig = herm_eig(c.a())?;
    let lambda_a = *eig.eigenvalues.get(spec.s1_eigenindex).ok_or_else(|| {
        CliError::Validation(format!(
            "s1_eigenindex {} out of range ({} eigenvalues)",
            spec.s1_eigenindex,
            eig.eigenvalues.len()
        ))
    })?;
    let (without, with) = controllability_delta(&c, lambda_a, &controls)?;
    let d2 = c.s2_space().total_dim();
    let full = d2 * d2 - 1;
    let random_pairs = spec
        .random_dims
        .iter()
        .map(|&d| {
            let dims = random_pair_dimensions(d, spec.random_samples, seed)?;
            Ok(RandomPairs {
                d,
                samples: spec.random_samples,
                all_full: dims.iter().all(|&k| k == d * d - 1),
                dimensions: dims,
            })
        })
        .collect::<emdyn_core::Result<Vec<_>>>()?;
    to_json(&ControllabilityReport {
        lambda_a,
        controls_only_dimension: without,
        with_drift_dimension: with,
        full_dimension: full,
        fully_controllable: with == full,
        random_pairs,
    })
    .map(Report::Json)
}

#[derive(Serialize)]
struct CertificationSummary {
    dims: Vec<usize>,
    samples: usize,
    seed: u64,
    violations: usize,
    max_ratio: f64,
    outcomes: Vec<CertificationOutcome>,
}

#[derive(Serialize)]
struct BoundsReport {
    gamma: f64,
    eta: f64,
    t: f64,
    pulsed: bool,
    exact_error: Option<f64>,
    empirical_error: f64,
    upper_bound: f64,
    bound_holds: bool,
    margin: f64,
    gamma_threshold: f64,
    above_threshold: bool,
    certification: Option<CertificationSummary>,
}

/// Slack allowed between empirical error and bound.
const BOUND_SLACK: f64 = 1e-9;

fn bounds(s: &Scenario, seed: u64, margin: f64) -> CliResult<Report> {
    let task = s.bounds_inputs()?;
    let spec = s.bounds.as_ref().expect("validated");
    let exact_error = if task.pulse().is_none() {
        Some(exact_error_commuting(&task)?)
    } else {
        None
    };
    let empirical = empirical_error(&task)?;
    let bound = error_upper_bound(&task);
    let threshold = gamma_threshold(&task, margin)?;
    let certification = match &spec.certification {
        None => None,
        Some(cert) => {
            let outcomes = certification_suite(&cert.dims, cert.samples, seed)?;
            let violations = outcomes.iter().filter(|o| !o.holds(BOUND_SLACK)).count();
            let max_ratio = outcomes
                .iter()
                .map(|o| {
                    if o.bound > 0.0 {
                        o.empirical / o.bound
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max);
            Some(CertificationSummary {
                dims: cert.dims.clone(),
                samples: cert.samples,
                seed,
                violations,
                max_ratio,
                outcomes,
            })
        }
    };
    to_json(&BoundsReport {
        gamma: task.coupling().gamma(),
        eta: task.coupling().eta(),
        t: task.t(),
        pulsed: task.pulse().is_some(),
        exact_error,
        empirical_error: empirical,
        upper_bound: bound,
        bound_holds: empirical <= bound + BOUND_SLACK,
        margin,
        gamma_threshold: threshold,
        above_threshold: task.coupling().gamma() >= threshold,
        certification,
    })
    .map(Report::Json)
}

#[derive(Serialize)]
struct ScanRow {
    gamma_z: f64,
    isolation: f64,
    elimination: f64,
}

#[derive(Serialize)]
struct CircuitReport {
    effective: EffectiveCoupling,
    strong_damping: StrongDampingReport,
    nonreciprocity: NonreciprocityCheck,
    phi1: f64,
    phi2: f64,
    isolation: JrmIsolation,
    gamma_z_scan: Vec<ScanRow>,
}

fn circuit_validate(s: &Scenario) -> CliResult<Report> {
    let spec = s.circuit.as_ref().expect("validated");
    let p = spec.params;
    let effective = effective_coupling_constants(&p)?;
    let strong_damping = strong_damping_condition(&p, spec.threshold)?;
    let nonreciprocity = nonreciprocity_conditions(&p, spec.phi, 1e-9)?;
    let (phi1, phi2) = (spec.phi1, spec.phi1 + PI + spec.phi);
    let rho1 = spec
        .s1
        .density(&HilbertSpace::single(2))
        .map_err(CliError::Validation)?;
    let rho23 = spec
        .s23
        .density(&HilbertSpace::qubits(2))
        .map_err(CliError::Validation)?;
    let isolation = jrm_isolation(&p, phi1, phi2, &rho1, &rho23, spec.t)?;
    let gamma_z_scan = spec
        .gamma_z_scan
        .par_iter()
        .map(|&gz| {
            let mut q = p;
            q.mode.gamma_z = gz;
            let r = jrm_isolation(&q, phi1, phi2, &rho1, &rho23, spec.t)?;
            Ok(ScanRow {
                gamma_z: gz,
                isolation: r.isolation,
                elimination: r.elimination,
            })
        })
        .collect::<emdyn_core::Result<Vec<_>>>()?;
    to_json(&CircuitReport {
        effective,
        strong_damping,
        nonreciprocity,
        phi1,
        phi2,
        isolation,
        gamma_z_scan,
    })
    .map(Report::Json)
}

#[derive(Serialize)]
struct TonesReport {
    tone_set: ToneSet,
    collisions: Vec<Collision>,
}

fn tones(s: &Scenario) -> CliResult<Report> {
    let spec = s.tones.as_ref().expect("validated");
    let tone_set = if spec.coherent {
        plan_coherent_tones(spec.omega, spec.phi_y)?
    } else {
        plan_dissipative_tones(
            spec.omega,
            spec.omega_z.expect("validated"),
            spec.phi_x,
            spec.phi_y,
        )?
    };
    let collisions = tone_set.collisions(&spec.transitions, spec.collision_tol);
    to_json(&TonesReport {
        tone_set,
        collisions,
    })
    .map(Report::Json)
}
