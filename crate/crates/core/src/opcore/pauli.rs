// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-qubit Pauli matrices and Pauli strings.
//!
//! Basis convention: `|0⟩ = (1, 0)ᵀ` is the +1 eigenstate of σz.

use super::operator::{tensor, CMatrix, Operator, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

fn qubit(entries: [C64; 4]) -> Operator {
    Operator::from_matrix(CMatrix::from_row_slice(2, 2, &entries)).expect("2x2 is square")
}

pub fn identity2() -> Operator {
    qubit([ONE, ZERO, ZERO, ONE])
}

pub fn sigma_x() -> Operator {
    qubit([ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> Operator {
    qubit([ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> Operator {
    qubit([ONE, ZERO, ZERO, -ONE])
}

/// `|0⟩⟨1|`, raising towards the σz = +1 state.
pub fn sigma_plus() -> Operator {
    qubit([ZERO, ONE, ZERO, ZERO])
}

/// `|1⟩⟨0|`
pub fn sigma_minus() -> Operator {
    qubit([ZERO, ZERO, ONE, ZERO])
}

/// Single Pauli factor from its letter (`I`, `X`, `Y`, `Z`, case-insensitive).
pub fn pauli(letter: char) -> Result<Operator> {
    match letter.to_ascii_uppercase() {
        'I' => Ok(identity2()),
        'X' => Ok(sigma_x()),
        'Y' => Ok(sigma_y()),
        'Z' => Ok(sigma_z()),
        other => Err(Error::InvalidParameter(format!(
            "unknown Pauli letter '{other}' (expected one of I, X, Y, Z)"
        ))),
    }
}

/// Tensor product of Pauli letters, leftmost letter on the first factor.
pub fn pauli_string(word: &str) -> Result<Operator> {
    let factors = word.chars().map(pauli).collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Err(Error::InvalidParameter("empty Pauli string".into()));
    }
    let refs: Vec<&Operator> = factors.iter().collect();
    Ok(tensor(&refs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        // XY = iZ
        assert_eq!(&x * &y, z.scaled(I));
        assert_eq!(&x * &x, identity2());
        assert_eq!(&sigma_plus() + &sigma_minus(), x);
    }

    #[test]
    fn strings() {
        let zz = pauli_string("zz").unwrap();
        assert_eq!(zz.space().factor_dims(), &[2, 2]);
        assert_eq!(zz.matrix()[(3, 3)], ONE);
        assert!(pauli_string("XQ").is_err());
        assert!(pauli_string("").is_err());
    }
}
