// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Hilbert-space and operator algebra foundation.

pub mod boson;
pub mod density;
pub mod expm;
pub mod operator;
pub mod pauli;
pub mod space;
pub mod sparse;
pub mod spectral;
pub mod superop;

pub use density::{partial_trace, partial_trace_operator, trace_distance, DensityMatrix};
pub use expm::{expm, expm_action, expm_dense, LinearMap};
pub use operator::{embed, hs_inner, tensor, CMatrix, CVector, Operator, C64, HERMITIAN_TOL};
pub use space::HilbertSpace;
pub use sparse::{sparse_liouvillian, CsrMatrix};
pub use spectral::{herm_eig, SpectralDecomposition};
pub use superop::{dissipator_superop, SuperOperator};
