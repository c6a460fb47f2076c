// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Operator and state specifications as they appear in scenario files.
//!
//! Operators are either Pauli expressions such as `"0.5*ZZ - XI"` or
//! `"sz⊗sz"`, or inline matrices `{ re = [[..]], im = [[..]] }`. States are
//! qubit labels (`0 1 + - r l`, one per qubit, or `mixed`), basis indices
//! `{ basis = k }` or amplitude vectors `{ re = [..], im = [..] }`.

use emdyn_core::opcore::pauli::{pauli, pauli_string};
use emdyn_core::{CMatrix, CVector, DensityMatrix, HilbertSpace, Operator, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Expr(String),
    Matrix(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeSpec {
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub basis: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Label(String),
    Basis(BasisSpec),
    Amplitudes(AmplitudeSpec),
}

fn factor(name: &str) -> Result<Operator, String> {
    let letter = match name.to_ascii_lowercase().as_str() {
        "x" | "sx" => 'X',
        "y" | "sy" => 'Y',
        "z" | "sz" => 'Z',
        "i" | "id" => 'I',
        _ => return Err(format!("unknown operator factor `{name}`")),
    };
    pauli(letter).map_err(|e| e.to_string())
}

fn product(text: &str) -> Result<Operator, String> {
    if text.contains('⊗') {
        let factors: Vec<Operator> = text.split('⊗').map(factor).collect::<Result<_, _>>()?;
        let refs: Vec<&Operator> = factors.iter().collect();
        Ok(emdyn_core::tensor(&refs))
    } else {
        pauli_string(text).map_err(|e| format!("`{text}`: {e}"))
    }
}

/// Splits at top-level `+`/`-`, keeping exponent signs such as `1e-3`.
fn terms(expr: &str) -> Vec<String> {
    let chars: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let exponent_sign = i >= 2
            && matches!(chars[i - 1], 'e' | 'E')
            && (chars[i - 2].is_ascii_digit() || chars[i - 2] == '.');
        if (c == '+' || c == '-') && !cur.is_empty() && !exponent_sign {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn term(text: &str) -> Result<(f64, Operator), String> {
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.strip_prefix('+').unwrap_or(text)),
    };
    let (coef, ops) = match body.split_once('*') {
        Some((c, o)) => (
            c.parse::<f64>()
                .map_err(|_| format!("bad coefficient `{c}`"))?,
            o,
        ),
        None => {
            let split = body
                .char_indices()
                .find(|(_, c)| c.is_ascii_alphabetic() && !matches!(c, 'e' | 'E'))
                .map_or(body.len(), |(i, _)| i);
            let (c, o) = body.split_at(split);
            let coef = if c.is_empty() {
                1.0
            } else {
                c.parse::<f64>()
                    .map_err(|_| format!("bad coefficient `{c}`"))?
            };
            (coef, o)
        }
    };
    if ops.is_empty() {
        return Err(format!("term `{text}` has no operator"));
    }
    Ok((sign * coef, product(ops)?))
}

/// Parses a Pauli expression into an operator.
pub fn parse_expression(expr: &str) -> Result<Operator, String> {
    let parts = terms(expr);
    if parts.is_empty() {
        return Err("empty operator expression".into());
    }
    let mut acc: Option<Operator> = None;
    for p in parts {
        let (c, op) = term(&p)?;
        let op = op.scaled_real(c);
        acc = Some(match acc {
            None => op,
            Some(a) if a.dim() == op.dim() => &a + &op,
            Some(a) => {
                return Err(format!(
                    "term `{p}` has dimension {}, expected {}",
                    op.dim(),
                    a.dim()
                ))
            }
        });
    }
    Ok(acc.expect("at least one term"))
}

fn matrix(spec: &MatrixSpec) -> Result<CMatrix, String> {
    let n = spec.re.len();
    if n == 0 || spec.re.iter().any(|r| r.len() != n) {
        return Err("matrix must be square and non-empty".into());
    }
    if let Some(im) = &spec.im {
        if im.len() != n || im.iter().any(|r| r.len() != n) {
            return Err("imaginary part must match the real part's shape".into());
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        C64::new(spec.re[i][j], spec.im.as_ref().map_or(0.0, |im| im[i][j]))
    }))
}

impl OperatorSpec {
    /// Resolves to an operator on `space`, requiring Hermiticity.
    pub fn resolve(&self, space: &HilbertSpace) -> Result<Operator, String> {
        let op = match self {
            OperatorSpec::Expr(e) => parse_expression(e)?,
            OperatorSpec::Matrix(m) => {
                Operator::from_matrix(matrix(m)?).map_err(|e| e.to_string())?
            }
        };
        if op.dim() != space.total_dim() {
            return Err(format!(
                "operator has dimension {}, space needs {}",
                op.dim(),
                space.total_dim()
            ));
        }
        let op = op.with_space(space.clone()).map_err(|e| e.to_string())?;
        op.ensure_hermitian(emdyn_core::opcore::HERMITIAN_TOL)
            .map_err(|e| e.to_string())?;
        Ok(op)
    }
}

fn label_vector(label: &str) -> Result<CVector, String> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::from_element(1, C64::new(1.0, 0.0));
    for c in label.chars() {
        let q = match c {
            '0' => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            '1' => [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            '+' => [C64::new(h, 0.0), C64::new(h, 0.0)],
            '-' => [C64::new(h, 0.0), C64::new(-h, 0.0)],
            'r' => [C64::new(h, 0.0), C64::new(0.0, h)],
            'l' => [C64::new(h, 0.0), C64::new(0.0, -h)],
            _ => return Err(format!("unknown qubit label `{c}` (use 0 1 + - r l)")),
        };
        v = v.kronecker(&CVector::from_row_slice(&q));
    }
    Ok(v)
}

impl StateSpec {
    /// State vector, or `None` for the maximally mixed state.
    pub fn vector(&self, dim: usize) -> Result<Option<CVector>, String> {
        let v = match self {
            StateSpec::Label(l) if l == "mixed" => return Ok(None),
            StateSpec::Label(l) => label_vector(l)?,
            StateSpec::Basis(b) => {
                if b.basis >= dim {
                    return Err(format!(
                        "basis index {} out of range for dimension {dim}",
                        b.basis
                    ));
                }
                let mut v = CVector::zeros(dim);
                v[b.basis] = C64::new(1.0, 0.0);
                v
            }
            StateSpec::Amplitudes(a) => {
                if let Some(im) = &a.im {
                    if im.len() != a.re.len() {
                        return Err("amplitude re/im lengths differ".into());
                    }
                }
                let v = CVector::from_fn(a.re.len(), |i, _| {
                    C64::new(a.re[i], a.im.as_ref().map_or(0.0, |im| im[i]))
                });
                let n = v.norm();
                if !(n > 0.0) {
                    return Err("zero amplitude vector".into());
                }
                v / C64::new(n, 0.0)
            }
        };
        if v.len() != dim {
            return Err(format!(
                "state has dimension {}, space needs {dim}",
                v.len()
            ));
        }
        Ok(Some(v))
    }

    pub fn pure_vector(&self, dim: usize) -> Result<CVector, String> {
        self.vector(dim)?
            .ok_or_else(|| "a pure state is required here".to_string())
    }

    pub fn density(&self, space: &HilbertSpace) -> Result<DensityMatrix, String> {
        match self.vector(space.total_dim())? {
            Some(v) => DensityMatrix::pure(space, &v).map_err(|e| e.to_string()),
            None => Ok(DensityMatrix::maximally_mixed(space)),
        }
    }
}
