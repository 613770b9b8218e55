//! Estimates with confidence intervals and the scaling-law fits
//! `log rho = b0 + b1 log(lambda) + b2 log|log(lambda)|`.

use polya_contact_core::stats::{least_squares, quantile_sorted, Summary};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normal 97.5% quantile.
const Z975: f64 = 1.959_963_984_540_054;

/// A Monte Carlo mean with its sample size and a 95% normal interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        Self::from_summary(Summary::of(values))
    }

    pub fn of_proportion(successes: u64, trials: u64) -> Self {
        Self::from_summary(Summary::of_proportion(successes, trials))
    }

    fn from_summary(s: Summary) -> Self {
        Estimate {
            n: s.count,
            mean: s.mean,
            std_error: s.std_error,
            ci_low: s.mean - Z975 * s.std_error,
            ci_high: s.mean + Z975 * s.std_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p| quantile_sorted(&v, p);
        Quantiles { q05: q(0.05), q25: q(0.25), q50: q(0.5), q75: q(0.75), q95: q(0.95) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeFit {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub se0: f64,
    pub se1: f64,
    pub se2: f64,
    pub r_squared: f64,
    pub residual_sd: f64,
    pub residuals: Vec<f64>,
}

/// Fit with `b2` held at a fixed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedFit {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub se0: f64,
    pub se1: f64,
    pub r_squared: f64,
    pub residual_sd: f64,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub free: FreeFit,
    pub constrained: ConstrainedFit,
    /// `1 + 2/psi`.
    pub target_beta1: f64,
    /// `-1/psi`.
    pub target_beta2: f64,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Fits both models to the points with `0 < lambda < 1` and a positive
/// value; needs at least [`MIN_FIT_POINTS`] of them.
pub fn fit_scaling(lambdas: &[f64], values: &[f64], psi: f64) -> Result<ScalingFit> {
    let (ls, vs): (Vec<f64>, Vec<f64>) = lambdas
        .iter()
        .zip(values)
        .filter(|(&l, &v)| l > 0.0 && l < 1.0 && v > 0.0)
        .map(|(&l, &v)| (l, v))
        .unzip();
    if ls.len() < MIN_FIT_POINTS {
        return Err(Error::Config(format!(
            "scaling fit needs {MIN_FIT_POINTS} points with 0 < lambda < 1 and a positive value, got {}",
            ls.len()
        )));
    }
    let y: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let x1: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
    let x2: Vec<f64> = ls.iter().map(|l| l.ln().abs().ln()).collect();
    let free_rows: Vec<Vec<f64>> = x1.iter().zip(&x2).map(|(&a, &b)| vec![1.0, a, b]).collect();
    let free = least_squares(&free_rows, &y)?;
    let target_beta2 = -1.0 / psi;
    let shifted: Vec<f64> = y.iter().zip(&x2).map(|(y, x)| y - target_beta2 * x).collect();
    let cons_rows: Vec<Vec<f64>> = x1.iter().map(|&a| vec![1.0, a]).collect();
    let cons = least_squares(&cons_rows, &shifted)?;
    Ok(ScalingFit {
        lambdas: ls,
        values: vs,
        free: FreeFit {
            beta0: free.coefficients[0],
            beta1: free.coefficients[1],
            beta2: free.coefficients[2],
            se0: free.std_errors[0],
            se1: free.std_errors[1],
            se2: free.std_errors[2],
            r_squared: free.r_squared,
            residual_sd: free.residual_sd,
            residuals: free.residuals,
        },
        constrained: ConstrainedFit {
            beta0: cons.coefficients[0],
            beta1: cons.coefficients[1],
            beta2: target_beta2,
            se0: cons.std_errors[0],
            se1: cons.std_errors[1],
            r_squared: cons.r_squared,
            residual_sd: cons.residual_sd,
            residuals: cons.residuals,
        },
        target_beta1: 1.0 + 2.0 / psi,
        target_beta2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_law() {
        let lambdas = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5];
        let values: Vec<f64> = lambdas.iter().map(|&l: &f64| 0.7 * l.powi(3) * l.ln().abs().powf(-1.0)).collect();
        let fit = fit_scaling(&lambdas, &values, 1.0).unwrap();
        assert!((fit.free.beta1 - 3.0).abs() < 1e-8);
        assert!((fit.free.beta2 + 1.0).abs() < 1e-8);
        assert!((fit.constrained.beta1 - 3.0).abs() < 1e-8);
        assert!((fit.constrained.beta0 - 0.7f64.ln()).abs() < 1e-8);
        assert_eq!(fit.target_beta1, 3.0);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_scaling(&[0.2, 0.3], &[0.1, 0.2], 1.0).is_err());
        // zero values are dropped before counting
        assert!(fit_scaling(&[0.1, 0.2, 0.3, 0.4, 0.5], &[0.0, 1.0, 1.0, 1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn interval_brackets_mean() {
        let e = Estimate::of(&[1.0, 2.0, 3.0, 4.0]);
        assert!(e.ci_low < e.mean && e.mean < e.ci_high);
        assert_eq!(e.n, 4);
    }
}
