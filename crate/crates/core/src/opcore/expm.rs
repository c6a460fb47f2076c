// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponentials.
//!
//! [`expm_dense`] is the scaling-and-squaring method with the Padé degree
//! chosen from the 1-norm (degrees 3, 5, 7, 9, 13). [`expm_action`] applies
//! `exp(tA)` to a single vector with a scaled, adaptively truncated Taylor
//! series and never forms the exponential; it is what the propagators use so
//! that large sparse Liouvillians stay cheap.

use super::operator::{CMatrix, CVector, Operator, C64, ONE};

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Induced 1-norm (max column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a dense square matrix.
pub fn expm_dense(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix exponential needs a square matrix");
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let eye = CMatrix::identity(n, n);
    let norm = norm1(a);
    if norm == 0.0 {
        return eye;
    }

    for (m, theta) in THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(a, coeffs, &eye);
        }
    }

    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * re(2f64.powi(-s));
    let mut x = pade13(&scaled, &eye);
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

fn pade_low(a: &CMatrix, b: &[f64], eye: &CMatrix) -> CMatrix {
    let a2 = a * a;
    let mut powers = vec![eye.clone(), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = CMatrix::zeros(a.nrows(), a.ncols());
    let mut v = CMatrix::zeros(a.nrows(), a.ncols());
    for (k, p) in powers.iter().enumerate() {
        u_inner += p * re(b[2 * k + 1]);
        v += p * re(b[2 * k]);
    }
    let u = a * u_inner;
    solve_pade(&u, &v)
}

fn pade13(a: &CMatrix, eye: &CMatrix) -> CMatrix {
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_high = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let u_inner = &a6 * u_high + &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + eye * re(b[1]);
    let u = a * u_inner;
    let v_high = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let v = &a6 * v_high + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + eye * re(b[0]);
    solve_pade(&u, &v)
}

fn solve_pade(u: &CMatrix, v: &CMatrix) -> CMatrix {
    let p = v + u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for the selected degree")
}

/// `exp(scale · A)` as an operator on the same space.
pub fn expm(op: &Operator, scale: C64) -> Operator {
    let m = expm_dense(&(op.matrix() * scale));
    Operator::new(op.space().clone(), m).expect("same shape")
}

/// A linear map on `C^n`, used by [`expm_action`].
pub trait LinearMap {
    fn dim(&self) -> usize;
    /// `y ← A x`
    fn apply_into(&self, x: &CVector, y: &mut CVector);
    /// An upper bound on the induced 1-norm.
    fn norm1_bound(&self) -> f64;
}

impl LinearMap for CMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply_into(&self, x: &CVector, y: &mut CVector) {
        y.gemv(ONE, self, x, C64::new(0.0, 0.0));
    }

    fn norm1_bound(&self) -> f64 {
        norm1(self)
    }
}

/// Per-substep norm budget for the Taylor action.
const STEP_NORM: f64 = 2.0;
const MAX_TERMS: usize = 80;

/// `exp(t·A) v` by scaled Taylor series.
///
/// The interval is split into `s = ⌈t‖A‖₁ / 2⌉` substeps; each substep sums
/// Taylor terms until two consecutive terms fall below `1e-17` relative to the
/// partial sum.
pub fn expm_action<M: LinearMap + ?Sized>(map: &M, v: &CVector, t: f64) -> CVector {
    assert_eq!(map.dim(), v.len(), "vector length does not match the map");
    let norm = map.norm1_bound() * t.abs();
    if norm == 0.0 || t == 0.0 {
        return v.clone();
    }
    let steps = (norm / STEP_NORM).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut current = v.clone();
    let mut term = CVector::zeros(v.len());
    let mut scratch = CVector::zeros(v.len());
    for _ in 0..steps {
        let mut sum = current.clone();
        term.copy_from(&current);
        let mut small_run = 0;
        for k in 1..=MAX_TERMS {
            map.apply_into(&term, &mut scratch);
            scratch *= re(h / k as f64);
            std::mem::swap(&mut term, &mut scratch);
            sum += &term;
            let tn = term.iter().map(|z| z.norm()).sum::<f64>();
            let sn = sum.iter().map(|z| z.norm()).sum::<f64>();
            if tn <= 1e-17 * sn.max(f64::MIN_POSITIVE) {
                small_run += 1;
                if small_run == 2 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        current = sum;
    }
    current
}
