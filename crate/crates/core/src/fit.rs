// Copyright 2026 The emdyn Authors
// SPDX-License-Identifier: Apache-2.0

//! Ordinary least-squares power-law fits in log-log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values below this are treated as numerically zero and cannot be fitted.
pub const FIT_FLOOR: f64 = 1e-14;

/// `y ≈ prefactor · x^exponent`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
}

impl PowerLawFit {
    /// True when the exponent is further than `tol` from the expected `1/x`
    /// decay.
    pub fn is_anomalous(&self, tol: f64) -> bool {
        (self.exponent + 1.0).abs() > tol
    }
}

/// Least-squares slope and intercept of `log y` against `log x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points".into()));
    }
    if let Some(x) = xs.iter().find(|&&x| x <= 0.0 || !x.is_finite()) {
        return Err(Error::DegenerateFit(format!(
            "abscissa {x} is not positive"
        )));
    }
    if let Some(y) = ys.iter().find(|&&y| !(y >= FIT_FLOOR) || !y.is_finite()) {
        return Err(Error::DegenerateFit(format!(
            "value {y:e} is below the fit floor {FIT_FLOOR:e}"
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let prefactor = (my - exponent * mx).exp();
    Ok(PowerLawFit {
        exponent,
        prefactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_inverse_law() {
        let xs = [10.0, 31.6, 100.0, 316.0, 1000.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 / x).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent + 1.0).abs() < 1e-6);
        assert!((fit.prefactor - 2.5).abs() < 1e-6);
        assert!(!fit.is_anomalous(0.2));
    }

    #[test]
    fn constant_data_is_flagged() {
        let fit = fit_power_law(&[1.0, 10.0, 100.0, 1000.0], &[0.3; 4]).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
        assert!(fit.is_anomalous(0.2));
    }

    #[test]
    fn underflow_is_rejected() {
        assert!(matches!(
            fit_power_law(&[1.0, 10.0], &[1e-3, 1e-16]),
            Err(Error::DegenerateFit(_))
        ));
    }
}
