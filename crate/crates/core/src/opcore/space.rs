// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composite Hilbert space described by its ordered factor dimensions.
///
/// The factor order is part of the identity of the space: operators built on
/// `[2, 4]` and `[4, 2]` are never interchangeable even though both have total
/// dimension 8. Throughout the crate subsystem S1 factors come first, then S2
/// factors, then any auxiliary bosonic mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpace {
    factor_dims: Vec<usize>,
}

impl HilbertSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidParameter(
                "a Hilbert space needs at least one factor".into(),
            ));
        }
        if let Some(&d) = factor_dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidParameter(format!(
                "factor dimension must be positive, got {d}"
            )));
        }
        Ok(Self { factor_dims })
    }

    /// Single-factor space of dimension `dim`.
    pub fn single(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            factor_dims: vec![dim],
        }
    }

    /// `n` qubit factors.
    pub fn qubits(n: usize) -> Self {
        assert!(n > 0, "need at least one qubit");
        Self {
            factor_dims: vec![2; n],
        }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Tensor composition `self ⊗ other`, concatenating the factor lists.
    pub fn compose(&self, other: &HilbertSpace) -> HilbertSpace {
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        HilbertSpace { factor_dims }
    }

    /// The space spanned by the listed factors, in ascending factor order.
    pub fn subspace(&self, keep: &[usize]) -> Result<HilbertSpace> {
        let keep = self.normalize_factor_set(keep)?;
        Ok(HilbertSpace {
            factor_dims: keep.iter().map(|&k| self.factor_dims[k]).collect(),
        })
    }

    /// Sorted, de-duplicated factor indices; rejects empty sets and
    /// out-of-range indices.
    pub(crate) fn normalize_factor_set(&self, factors: &[usize]) -> Result<Vec<usize>> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "factor index set must be non-empty".into(),
            ));
        }
        let mut out = factors.to_vec();
        out.sort_unstable();
        out.dedup();
        if let Some(&bad) = out.iter().find(|&&k| k >= self.num_factors()) {
            return Err(Error::BadFactorIndex {
                index: bad,
                factors: self.num_factors(),
            });
        }
        Ok(out)
    }
}

impl std::fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factor_dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("⊗"))
    }
}
