// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Flux-modulation tone planning for the three-qubit coupler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single drive tone `cos(ω t + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub frequency: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToneRole {
    /// Needed by the target interaction.
    Required,
    /// Combination at `2Ω₁`, carried by the product signal but unused.
    Unused,
    /// Zero-frequency combination, dropped.
    Dc,
}

/// Sum or difference combination of x tone `x_index` and y tone `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedTone {
    pub label: String,
    pub m: usize,
    pub sign: i8,
    pub x_index: usize,
    pub frequency: f64,
    /// Phase label `φ_{y,m} ± φ_{x}`.
    pub phase: f64,
    /// Phase actually carried by the product signal at this frequency.
    pub signal_phase: f64,
    /// Set when a negative combination was folded onto `|ω|`.
    pub folded: bool,
    pub role: ToneRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToneSet {
    pub x: Vec<Tone>,
    pub y: Vec<Tone>,
    pub derived: Vec<DerivedTone>,
    pub warnings: Vec<String>,
}

/// Tone closer than `tol` to a forbidden transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub label: String,
    pub frequency: f64,
    pub transition: f64,
}

fn check_frequencies(omega: &[f64; 3]) -> Result<()> {
    for (i, &w) in omega.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "qubit frequency Omega_{} = {w} must be positive",
                i + 1
            )));
        }
    }
    Ok(())
}

fn y_tones(omega: &[f64; 3], phi_y: &[f64; 3]) -> Result<Vec<Tone>> {
    check_frequencies(omega)?;
    let diff = omega[1] - omega[2];
    if !(diff > 0.0) {
        return Err(Error::NegativeToneFrequency {
            combination: "Omega2 - Omega3".into(),
            frequency: diff,
        });
    }
    Ok(vec![
        Tone {
            frequency: omega[0],
            phase: phi_y[0],
        },
        Tone {
            frequency: omega[1] + omega[2],
            phase: phi_y[1],
        },
        Tone {
            frequency: diff,
            phase: phi_y[2],
        },
    ])
}

fn combine(x: Tone, y: &[Tone]) -> Vec<(usize, i8, f64, f64, f64)> {
    let mut out = Vec::with_capacity(2 * y.len());
    for (m, t) in y.iter().enumerate() {
        for sign in [1i8, -1] {
            let s = f64::from(sign);
            out.push((
                m + 1,
                sign,
                x.frequency + s * t.frequency,
                t.phase + s * x.phase,
                x.phase + s * t.phase,
            ));
        }
    }
    out
}

/// Dissipative plan: x tone `ω_z`, y tones `{Ω₁, Ω₂+Ω₃, Ω₂−Ω₃}`, derived `ω_z ± ω_{y,m}`.
pub fn plan_dissipative_tones(
    omega: [f64; 3],
    omega_z: f64,
    phi_x: f64,
    phi_y: [f64; 3],
) -> Result<ToneSet> {
    if !(omega_z > 0.0) || !omega_z.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mode frequency {omega_z} must be positive"
        )));
    }
    let y = y_tones(&omega, &phi_y)?;
    let x = Tone {
        frequency: omega_z,
        phase: phi_x,
    };
    let mut derived = Vec::with_capacity(6);
    for (m, sign, frequency, phase, signal_phase) in combine(x, &y) {
        let label = format!("{m},{}", if sign > 0 { '+' } else { '-' });
        if !(frequency > 0.0) {
            return Err(Error::NegativeToneFrequency {
                combination: label,
                frequency,
            });
        }
        derived.push(DerivedTone {
            label,
            m,
            sign,
            x_index: 0,
            frequency,
            phase,
            signal_phase,
            folded: false,
            role: ToneRole::Required,
        });
    }
    Ok(ToneSet {
        x: vec![x],
        y,
        derived,
        warnings: Vec::new(),
    })
}

/// Coherent plan: `ω_z → Ω₁` with phases `θ_{m,±} = φ_{y,m} ± φ_{y,1}`.
/// Negative combinations are folded onto `|ω|`; `2Ω₁` is marked unused and DC dropped.
pub fn plan_coherent_tones(omega: [f64; 3], phi_y: [f64; 3]) -> Result<ToneSet> {
    let y = y_tones(&omega, &phi_y)?;
    let x = Tone {
        frequency: omega[0],
        phase: phi_y[0],
    };
    let scale = omega.iter().fold(0.0f64, |m, w| m.max(*w));
    let mut derived = Vec::with_capacity(6);
    let mut warnings = Vec::new();
    for (m, sign, frequency, phase, signal_phase) in combine(x, &y) {
        let label = format!("{m},{}", if sign > 0 { '+' } else { '-' });
        let (role, note) = if frequency.abs() <= 1e-12 * scale {
            (
                ToneRole::Dc,
                Some(format!("theta_{label} is a DC term and is dropped")),
            )
        } else if m == 1 && sign > 0 {
            (
                ToneRole::Unused,
                Some(format!(
                    "theta_{label} at 2*Omega1 = {frequency} is not used by the three-body term"
                )),
            )
        } else {
            (ToneRole::Required, None)
        };
        warnings.extend(note);
        let folded = frequency < 0.0;
        derived.push(DerivedTone {
            label,
            m,
            sign,
            x_index: 0,
            frequency: frequency.abs(),
            phase,
            signal_phase: if folded { -signal_phase } else { signal_phase },
            folded,
            role,
        });
    }
    Ok(ToneSet {
        x: vec![x],
        y,
        derived,
        warnings,
    })
}

impl ToneSet {
    pub fn required(&self) -> impl Iterator<Item = &DerivedTone> {
        self.derived.iter().filter(|d| d.role == ToneRole::Required)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.required().map(|d| d.frequency).collect()
    }

    /// Derived tones within `tol` of any listed transition frequency.
    pub fn collisions(&self, transitions: &[f64], tol: f64) -> Vec<Collision> {
        self.required()
            .flat_map(|d| {
                transitions
                    .iter()
                    .filter(move |&&w| (d.frequency - w).abs() <= tol)
                    .map(move |&w| Collision {
                        label: d.label.clone(),
                        frequency: d.frequency,
                        transition: w,
                    })
            })
            .collect()
    }

    /// `(φ₁, φ₂)` for the resonant model, requiring `φ_{1,+} = φ_{1,−}` and
    /// `φ_{2,±} = φ_{3,±}` within `tol` (mod 2π).
    pub fn reduced_phases(&self, tol: f64) -> Result<(f64, f64)> {
        let get = |m: usize, sign: i8| {
            self.derived
                .iter()
                .find(|d| d.m == m && d.sign == sign)
                .map(|d| d.phase)
                .ok_or_else(|| Error::InvalidParameter(format!("missing tone {m},{sign}")))
        };
        let same = |a: f64, b: f64| {
            let d = (a - b).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d) <= tol
        };
        let (p1p, p1m) = (get(1, 1)?, get(1, -1)?);
        let (p2p, p2m, p3p, p3m) = (get(2, 1)?, get(2, -1)?, get(3, 1)?, get(3, -1)?);
        if !same(p1p, p1m) || !same(p2p, p2m) || !same(p2p, p3p) || !same(p2m, p3m) {
            return Err(Error::InvalidParameter(
                "tone phases do not reduce to a single (phi1, phi2) pair".into(),
            ));
        }
        Ok((p1p, p2p))
    }
}

/// Modulation signal at time `t` evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationValue {
    /// `Π_{n=x,y} Σ_m cos(ω_{n,m} t + φ_{n,m})`
    pub product: f64,
    /// `Σ_{x,y} ½[cos((ω_x+ω_y)t + φ_x+φ_y) + cos((ω_x−ω_y)t + φ_x−φ_y)]`
    pub sum: f64,
}

pub fn modulation_signal(tones: &ToneSet, t: f64) -> ModulationValue {
    let side = |ts: &[Tone]| {
        ts.iter()
            .map(|w| (w.frequency * t + w.phase).cos())
            .sum::<f64>()
    };
    let product = side(&tones.x) * side(&tones.y);
    let mut sum = 0.0;
    for x in &tones.x {
        for y in &tones.y {
            sum += 0.5 * ((x.frequency + y.frequency) * t + x.phase + y.phase).cos();
            sum += 0.5 * ((x.frequency - y.frequency) * t + x.phase - y.phase).cos();
        }
    }
    ModulationValue { product, sum }
}
