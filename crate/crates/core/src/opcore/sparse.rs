// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Compressed-sparse-row Liouvillians for spaces where the dense `d² × d²`
//! superoperator would be wasteful (qubits coupled to a truncated mode).

use super::expm::LinearMap;
use super::operator::{CMatrix, CVector, Operator, C64, I};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds an `n × n` matrix from `(row, col, value)` triplets, summing
    /// duplicates and dropping exact zeros.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet index out of range");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        let mut m = Self {
            n,
            indptr,
            indices,
            values,
        };
        m.prune();
        m
    }

    fn prune(&mut self) {
        let mut indptr = vec![0usize; self.n + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.n {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.values[k] != C64::new(0.0, 0.0) {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr[r + 1] = indices.len();
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for k in self.indptr[r]..self.indptr[r + 1] {
                m[(r, self.indices[k])] += self.values[k];
            }
        }
        m
    }
}

impl LinearMap for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &CVector, y: &mut CVector) {
        for r in 0..self.n {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            y[r] = acc;
        }
    }

    fn norm1_bound(&self) -> f64 {
        let mut cols = vec![0.0_f64; self.n];
        for (c, v) in self.indices.iter().zip(&self.values) {
            cols[*c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Triplets of `(A ⊗ Bᵀ) · scale`, i.e. `ρ ↦ scale · AρB` under row
/// vectorization.
fn push_sandwich(out: &mut Vec<(usize, usize, C64)>, a: &CMatrix, b: &CMatrix, scale: C64) {
    let d = a.nrows();
    let bt = b.transpose();
    let na = nonzeros(a);
    let nb = nonzeros(&bt);
    for &(i, j, va) in &na {
        for &(k, l, vb) in &nb {
            out.push((i * d + k, j * d + l, scale * va * vb));
        }
    }
}

/// Sparse Lindblad generator `−i[H, ·] + Σ_k rate_k 𝒟[L_k]`.
pub fn sparse_liouvillian(h: &Operator, jumps: &[(Operator, f64)]) -> CsrMatrix {
    let d = h.dim();
    let id = CMatrix::identity(d, d);
    let mut t = Vec::new();
    push_sandwich(&mut t, h.matrix(), &id, -I);
    push_sandwich(&mut t, &id, h.matrix(), I);
    for (l, rate) in jumps {
        if *rate == 0.0 {
            continue;
        }
        let r = C64::new(*rate, 0.0);
        let ld = l.matrix().adjoint();
        let ldl = &ld * l.matrix();
        push_sandwich(&mut t, l.matrix(), &ld, r);
        push_sandwich(&mut t, &ldl, &id, -r * 0.5);
        push_sandwich(&mut t, &id, &ldl, -r * 0.5);
    }
    CsrMatrix::from_triplets(d * d, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::space::HilbertSpace;
    use crate::opcore::superop::{dissipator_superop, SuperOperator};
    use crate::random::{random_hermitian_on, random_operator, seeded_rng};

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(
            2,
            vec![
                (0, 1, C64::new(1.0, 0.0)),
                (0, 1, C64::new(2.0, 0.0)),
                (1, 0, C64::new(0.0, 0.0)),
            ],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense()[(0, 1)], C64::new(3.0, 0.0));
    }

    #[test]
    fn sparse_matches_dense_liouvillian() {
        let mut rng = seeded_rng(4);
        let s = HilbertSpace::new(vec![2, 3]).unwrap();
        let h = random_hermitian_on(&s, &mut rng);
        let l1 = random_operator(&s, &mut rng);
        let l2 = random_operator(&s, &mut rng);
        let sparse = sparse_liouvillian(&h, &[(l1.clone(), 0.7), (l2.clone(), 2.0)]);
        let dense = &(&SuperOperator::hamiltonian(&h) + &dissipator_superop(&l1).scaled_real(0.7))
            + &dissipator_superop(&l2).scaled_real(2.0);
        assert!((sparse.to_dense() - dense.matrix()).camax() < 1e-12);
        assert!((sparse.norm1_bound() - dense.norm1_bound()).abs() < 1e-10);
    }
}
