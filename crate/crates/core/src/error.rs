// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("factor index {index} out of range for a space with {factors} factors")]
    BadFactorIndex { index: usize, factors: usize },

    #[error("eigenindex {index} out of range ({count} distinct eigenvalues)")]
    BadEigenindex { index: usize, count: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("non-physical propagation result: {0}")]
    NonPhysicalResult(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("the closed-form commuting error is only defined for tasks without a control pulse")]
    RequiresNoPulse,

    #[error("primary coupling lambda1 must be nonzero")]
    ZeroPrimaryCoupling,

    #[error("Fock truncation n_max = {n_max} is too small for an estimated occupation of {occupation:.3e}")]
    TruncationTooSmall { n_max: usize, occupation: f64 },

    #[error("detuned system-bath interaction (detuning {detuning}) is not supported; only the resonant frame is modelled")]
    NonzeroDetuning { detuning: f64 },

    #[error("tone combination {combination} has non-positive frequency {frequency}")]
    NegativeToneFrequency { combination: String, frequency: f64 },

    #[error("dispersive ratio lambda_{index}z = {value} exceeds {limit}")]
    DispersiveViolation {
        index: usize,
        value: f64,
        limit: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
