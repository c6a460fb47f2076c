// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::space::HilbertSpace;
use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Default absolute tolerance for Hermiticity checks on user input.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Dense square operator on a composite Hilbert space.
///
/// Hermiticity and unitarity are checked on demand, never assumed. The
/// arithmetic operators panic when the two operands live on different spaces,
/// mirroring how `nalgebra` treats shape mismatches.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() != d {
            return Err(Error::DimMismatch {
                expected: d,
                found: matrix.nrows(),
            });
        }
        Ok(Self { space, matrix })
    }

    /// Wraps a square matrix as an operator on a single factor.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        let space = HilbertSpace::single(matrix.nrows());
        Self::new(space, matrix)
    }

    /// Builds a single-factor operator from row-major real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        Self::from_matrix(m)
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::zeros(d, d),
        }
    }

    /// Outer product `|ket⟩⟨bra|` on `space`.
    pub fn outer(space: &HilbertSpace, ket: &CVector, bra: &CVector) -> Result<Self> {
        let d = space.total_dim();
        for v in [ket, bra] {
            if v.len() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
        }
        Self::new(space.clone(), ket * bra.adjoint())
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Re-labels the factor structure without touching the matrix.
    pub fn with_space(self, space: HilbertSpace) -> Result<Self> {
        Self::new(space, self.matrix)
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// Largest entrywise modulus of `A − A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Fails with [`Error::NotHermitian`] unless Hermitian to `tol`.
    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            Err(Error::NotHermitian { deviation })
        } else {
            Ok(())
        }
    }

    /// Operator-norm distance of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let prod = self.matrix.adjoint() * &self.matrix - CMatrix::identity(n, n);
        spectral_norm(&prod)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * factor,
        }
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        self.scaled(C64::new(factor, 0.0))
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Operator) -> Self {
        self.assert_same_space(other);
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        }
    }

    /// `{self, other}`
    pub fn anticommutator(&self, other: &Operator) -> Self {
        self.assert_same_space(other);
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix + &other.matrix * &self.matrix,
        }
    }

    /// Operator (spectral) norm ‖·‖∞, the largest singular value.
    pub fn op_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Removes the identity component: `A − tr(A)/d · 𝟙`.
    pub fn traceless_part(&self) -> Self {
        let d = self.dim() as f64;
        let shift = self.trace() / d;
        let mut matrix = self.matrix.clone();
        for i in 0..self.dim() {
            matrix[(i, i)] -= shift;
        }
        Self {
            space: self.space.clone(),
            matrix,
        }
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Self {
        Self {
            space: self.space.compose(&other.space),
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    fn assert_same_space(&self, other: &Operator) {
        assert_eq!(self.space, other.space, "operators act on different spaces");
    }
}

/// Largest singular value of a dense matrix.
pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.assert_same_space(rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scaled_real(-1.0)
    }
}

/// Kronecker product of a list of operators in the given factor order.
///
/// The result's space concatenates the factor lists of the inputs, so
/// `tensor(&[&a, &b])` on spaces `[2]` and `[2, 2]` lives on `[2, 2, 2]`.
pub fn tensor(ops: &[&Operator]) -> Operator {
    let (first, rest) = ops
        .split_first()
        .expect("tensor needs at least one operator");
    rest.iter().fold((*first).clone(), |acc, op| acc.kron(op))
}

/// Embeds `op` on factor group `position` of `groups`, padding the other
/// groups with identities. `groups[position]` must equal `op.space()`.
pub fn embed(op: &Operator, position: usize, groups: &[&HilbertSpace]) -> Result<Operator> {
    if position >= groups.len() {
        return Err(Error::BadFactorIndex {
            index: position,
            factors: groups.len(),
        });
    }
    if groups[position] != op.space() {
        return Err(Error::DimMismatch {
            expected: groups[position].total_dim(),
            found: op.dim(),
        });
    }
    let parts: Vec<Operator> = groups
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k == position {
                op.clone()
            } else {
                Operator::identity(s)
            }
        })
        .collect();
    let refs: Vec<&Operator> = parts.iter().collect();
    Ok(tensor(&refs))
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.matrix
        .iter()
        .zip(b.matrix.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::pauli::{identity2, sigma_x, sigma_y, sigma_z};

    #[test]
    fn tensor_places_factor_in_order() {
        let x1 = tensor(&[&sigma_x(), &identity2()]);
        assert_eq!(x1.space().factor_dims(), &[2, 2]);
        // σx ⊗ 𝟙 maps |00⟩ → |10⟩ (index 0 → 2)
        assert_eq!(x1.matrix()[(2, 0)], ONE);
        assert_eq!(x1.matrix()[(1, 0)], ZERO);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let id = tensor(&[&identity2(), &identity2()]);
        assert_eq!(id.matrix(), &CMatrix::identity(4, 4));
    }

    #[test]
    fn zz_on_01_has_eigenvalue_minus_one() {
        let zz = tensor(&[&sigma_z(), &sigma_z()]);
        let mut v = CVector::zeros(4);
        v[1] = ONE;
        let w = zz.apply(&v);
        assert_eq!(w, -v);
    }

    #[test]
    fn tensor_is_associative() {
        let a = sigma_x();
        let b = sigma_y();
        let c = sigma_z();
        let left = tensor(&[&tensor(&[&a, &b]), &c]);
        let right = tensor(&[&a, &tensor(&[&b, &c])]);
        assert_eq!(left.matrix(), right.matrix());
        assert_eq!(left.space(), right.space());
    }

    #[test]
    fn hs_inner_pauli_values() {
        assert_eq!(
            hs_inner(&sigma_x(), &sigma_x()).unwrap(),
            C64::new(2.0, 0.0)
        );
        assert_eq!(hs_inner(&sigma_x(), &sigma_y()).unwrap(), ZERO);
        assert_eq!(hs_inner(&identity2(), &sigma_z()).unwrap(), ZERO);
        let big = Operator::identity(&HilbertSpace::single(3));
        assert!(matches!(
            hs_inner(&sigma_x(), &big),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn hermiticity_and_unitarity_predicates() {
        assert!(sigma_y().is_hermitian(0.0));
        assert!(sigma_y().is_unitary(1e-14));
        let m = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(!m.is_hermitian(1e-3));
        assert!(matches!(
            m.ensure_hermitian(1e-9),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn embed_pads_with_identities() {
        let s1 = HilbertSpace::single(2);
        let s2 = HilbertSpace::qubits(2);
        let zz = tensor(&[&sigma_z(), &sigma_z()]);
        let b2 = embed(&zz, 1, &[&s1, &s2]).unwrap();
        assert_eq!(b2, tensor(&[&identity2(), &zz]));
        assert!(embed(&zz, 0, &[&s1, &s2]).is_err());
    }
}
