// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Dynamical Lie algebras and controllability of S2.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liouville::DissipativeCoupling;
use crate::opcore::{HilbertSpace, Operator, C64, HERMITIAN_TOL};
use crate::random::{random_hermitian, stream_rng};

/// A candidate is independent when its residual exceeds this fraction of its
/// own norm.
pub const INDEPENDENCE_RTOL: f64 = 1e-8;

/// Orthonormal basis (under `Re tr(X†Y)`) of traceless skew-Hermitian
/// operators.
#[derive(Debug, Clone, PartialEq)]
pub struct LieBasis {
    space: HilbertSpace,
    elements: Vec<Operator>,
}

impl LieBasis {
    fn empty(space: &HilbertSpace) -> Self {
        Self {
            space: space.clone(),
            elements: Vec::new(),
        }
    }

    /// `d`, the dimension of the underlying Hilbert space.
    pub fn dim_space(&self) -> usize {
        self.space.total_dim()
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    /// Dimension of the algebra.
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// `d² − 1`
    pub fn full_dimension(&self) -> usize {
        self.dim_space() * self.dim_space() - 1
    }

    /// Gram–Schmidt step. Returns `true` when `x` extended the basis.
    fn try_insert(&mut self, x: &Operator) -> bool {
        let norm = x.frobenius_norm();
        if norm == 0.0 || self.dimension() >= self.full_dimension() {
            return false;
        }
        let mut r = x.clone();
        // two passes keep the basis orthonormal to round-off
        for _ in 0..2 {
            for e in &self.elements {
                let overlap = real_inner(e, &r);
                r = &r - &e.scaled_real(overlap);
            }
        }
        let rn = r.frobenius_norm();
        if rn > INDEPENDENCE_RTOL * norm {
            self.elements.push(r.scaled_real(1.0 / rn));
            true
        } else {
            false
        }
    }
}

/// `Re tr(a† b)`
fn real_inner(a: &Operator, b: &Operator) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// Smallest real Lie algebra containing `i·H` for each (traceless-projected)
/// Hermitian generator.
///
/// Elements are generated breadth-first: every new element is commuted with
/// all earlier ones in insertion order, so the basis is deterministic.
pub fn lie_closure(generators: &[Operator]) -> Result<LieBasis> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
    let space = first.space().clone();
    let mut basis = LieBasis::empty(&space);
    for h in generators {
        if h.space() != &space {
            return Err(Error::DimMismatch {
                expected: space.total_dim(),
                found: h.dim(),
            });
        }
        h.ensure_hermitian(HERMITIAN_TOL)?;
        basis.try_insert(&h.traceless_part().scaled(C64::new(0.0, 1.0)));
    }
    let mut k = 0;
    while k < basis.dimension() && basis.dimension() < basis.full_dimension() {
        for j in 0..k {
            let c = basis.elements[j].commutator(&basis.elements[k]);
            basis.try_insert(&c);
        }
        k += 1;
    }
    Ok(basis)
}

/// `dim 𝔏 = d² − 1`
pub fn is_fully_controllable(basis: &LieBasis) -> bool {
    basis.dimension() == basis.full_dimension()
}

/// Effective drift `λ_a (g + η sin φ) B` on S2 for S1 in the `λ_a` eigenspace.
pub fn dissipation_induced_drift(c: &DissipativeCoupling, lambda_a: f64) -> Operator {
    c.b().scaled_real(lambda_a * c.s2_coefficient())
}

/// Closure dimensions of the controls alone and of controls plus drift.
pub fn controllability_delta_with_drift(
    drift: &Operator,
    controls: &[Operator],
) -> Result<(usize, usize)> {
    if controls.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one control is required".into(),
        ));
    }
    let without = lie_closure(controls)?.dimension();
    let mut all = controls.to_vec();
    all.push(drift.clone());
    let with = lie_closure(&all)?.dimension();
    Ok((without, with))
}

/// Gain in Lie algebra dimension due to the dissipation-induced drift.
pub fn controllability_delta(
    c: &DissipativeCoupling,
    lambda_a: f64,
    controls: &[Operator],
) -> Result<(usize, usize)> {
    controllability_delta_with_drift(&dissipation_induced_drift(c, lambda_a), controls)
}

/// Closure dimensions of `samples` random Hermitian pairs on `C^d`, sample `k`
/// drawn from stream `k` of `seed`.
pub fn random_pair_dimensions(d: usize, samples: usize, seed: u64) -> Result<Vec<usize>> {
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let h0 = random_hermitian(d, &mut rng);
            let h1 = random_hermitian(d, &mut rng);
            Ok(lie_closure(&[h0, h1])?.dimension())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::hs_inner;
    use crate::opcore::pauli::{pauli_string, sigma_x, sigma_y, sigma_z};
    use crate::random::seeded_rng;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn ising() -> (Operator, Operator) {
        let zz = pauli_string("ZZ").unwrap();
        let x = &pauli_string("XI").unwrap() + &pauli_string("IX").unwrap();
        (zz, x)
    }

    #[test]
    fn pauli_closures() {
        assert_eq!(lie_closure(&[sigma_x(), sigma_z()]).unwrap().dimension(), 3);
        assert_eq!(lie_closure(&[sigma_z()]).unwrap().dimension(), 1);
        let (zz, x) = ising();
        // brute-force closure oracle: span{ZZ, XI+IX, YZ+ZY, YY}
        assert_eq!(lie_closure(&[zz, x]).unwrap().dimension(), 4);
    }

    #[test]
    fn identity_components_are_removed() {
        let shifted = &sigma_z() + &Operator::identity(sigma_z().space()).scaled_real(3.0);
        assert_eq!(lie_closure(&[shifted]).unwrap().dimension(), 1);
        assert_eq!(
            lie_closure(&[Operator::identity(sigma_z().space())])
                .unwrap()
                .dimension(),
            0
        );
    }

    #[test]
    fn controllability_predicate() {
        assert!(is_fully_controllable(
            &lie_closure(&[sigma_x(), sigma_y()]).unwrap()
        ));
        assert!(!is_fully_controllable(&lie_closure(&[sigma_x()]).unwrap()));
    }

    #[test]
    fn random_pairs_generate_full_algebra() {
        for d in [3, 4] {
            let dims = random_pair_dimensions(d, 10, 7).unwrap();
            assert!(dims.iter().all(|&k| k == d * d - 1));
        }
    }

    #[test]
    fn drift_examples() {
        let c = DissipativeCoupling::new(sigma_z(), sigma_x(), 10.0, 0.5, FRAC_PI_2, 0.0).unwrap();
        assert_eq!(
            dissipation_induced_drift(&c, 1.0),
            sigma_x().scaled_real(0.5)
        );
        let cancel = c.with_g(0.5).unwrap().with_phi(-FRAC_PI_2).unwrap();
        assert_eq!(dissipation_induced_drift(&cancel, 1.0).max_abs(), 0.0);
        let unit = c.with_eta(1.0).unwrap().with_g(1.0).unwrap();
        assert_eq!(
            dissipation_induced_drift(&unit, 1.0),
            sigma_x().scaled_real(2.0)
        );
    }

    #[test]
    fn delta_examples() {
        let c = DissipativeCoupling::new(sigma_x(), sigma_z(), 10.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert_eq!(
            controllability_delta(&c, 1.0, &[sigma_x()]).unwrap(),
            (1, 3)
        );
        let (zz, x) = ising();
        let c2 = DissipativeCoupling::new(sigma_z(), zz, 10.0, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert_eq!(
            controllability_delta(&c2, 1.0, std::slice::from_ref(&x)).unwrap(),
            (1, 4)
        );
        let off = c2.with_g(1.0).unwrap().with_phi(-FRAC_PI_2).unwrap();
        assert_eq!(controllability_delta(&off, 1.0, &[x]).unwrap(), (1, 1));
        assert!(controllability_delta(&c, 1.0, &[]).is_err());
    }

    #[test]
    fn basis_is_orthonormal_and_skew() {
        let mut rng = seeded_rng(70);
        let h0 = random_hermitian(3, &mut rng);
        let h1 = random_hermitian(3, &mut rng);
        let b = lie_closure(&[h0, h1]).unwrap();
        for (i, x) in b.elements().iter().enumerate() {
            assert!(x.trace().norm() < 1e-10);
            assert!((x + &x.dagger()).max_abs() < 1e-10);
            for (j, y) in b.elements().iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((hs_inner(x, y).unwrap().re - expected).abs() < 1e-10);
            }
        }
        let again = lie_closure(
            &b.elements()
                .iter()
                .map(|x| x.scaled(C64::new(0.0, -1.0)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(again.dimension(), b.dimension());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn dimension_is_invariant_under_recombination(s in 0.1f64..10.0, m in -3.0f64..3.0) {
            let (zz, x) = ising();
            let base = lie_closure(&[zz.clone(), x.clone()]).unwrap().dimension();
            let mixed = &zz + &x.scaled_real(m);
            let dim = lie_closure(&[mixed, x.scaled_real(s)]).unwrap().dimension();
            prop_assert_eq!(dim, base);
            prop_assert!(dim <= 15);
        }
    }
}
