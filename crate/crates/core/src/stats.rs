//! Descriptive statistics, regressions and two-sample statistics used by the
//! metrics and by experiment summaries.
//!
//! p-values are deliberately absent: they need special functions that the
//! companion crate takes from `statrs`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::math::sqrt;
use crate::{Error, Result};

/// Mean, sample standard deviation and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Summary {
                count,
                mean: f64::NAN,
                std_dev: f64::NAN,
                std_error: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let var = if count > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        let std_dev = sqrt(var);
        Summary {
            count,
            mean,
            std_dev,
            std_error: std_dev / sqrt(count as f64),
        }
    }

    /// Summary of a 0/1 outcome with `successes` out of `trials`.
    pub fn of_proportion(successes: u64, trials: u64) -> Self {
        let p = successes as f64 / trials as f64;
        let var = p * (1.0 - p);
        Summary {
            count: trials as usize,
            mean: p,
            std_dev: sqrt(var),
            std_error: sqrt(var / trials as f64),
        }
    }
}

/// Linear-interpolated quantile of an ascending slice (type 7).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let pos = q.clamp(0.0, 1.0) * (len - 1) as f64;
            let lo = pos as usize;
            let hi = (lo + 1).min(len - 1);
            let frac = pos - lo as f64;
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, 0.5)
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / sqrt(sxx * syy)
}

/// Ordinary least squares fit with coefficient standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    /// Residual standard deviation, `sqrt(RSS / (n - p))`.
    pub residual_sd: f64,
}

/// Fits `y ~ design * beta`. Each row of `design` holds the regressors of one
/// observation, including a leading 1.0 when an intercept is wanted.
pub fn least_squares(design: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares> {
    let n = y.len();
    let p = design.first().map_or(0, Vec::len);
    if n <= p || design.len() != n {
        return Err(Error::TooFewPoints {
            got: n,
            required: p + 1,
        });
    }
    let x = DMatrix::from_fn(n, p, |i, j| design[i][j]);
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * &x;
    let xtx_inv = xtx.try_inverse().ok_or(Error::SingularSystem)?;
    let beta = &xtx_inv * x.transpose() * &yv;
    let fitted = &x * &beta;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    let sigma2 = rss / (n - p) as f64;
    let std_errors = (0..p).map(|j| sqrt(sigma2 * xtx_inv[(j, j)])).collect();
    Ok(LeastSquares {
        coefficients: beta.iter().copied().collect(),
        std_errors,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { 0.0 },
        residuals,
        residual_sd: sqrt(sigma2),
    })
}

/// Simple regression `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub intercept_se: f64,
    pub slope_se: f64,
    pub r_squared: f64,
}

pub fn line_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let design: Vec<Vec<f64>> = x.iter().map(|&v| alloc::vec![1.0, v]).collect();
    let fit = least_squares(&design, y)?;
    Ok(LineFit {
        intercept: fit.coefficients[0],
        slope: fit.coefficients[1],
        intercept_se: fit.std_errors[0],
        slope_se: fit.std_errors[1],
        r_squared: fit.r_squared,
    })
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`. Ties are
/// handled by stepping both empirical CDFs past each distinct value.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Chi-square test of homogeneity between two samples of integer-valued
/// observations. Adjacent values are pooled into bins holding at least
/// `min_pooled` observations across both samples; the last bin absorbs the
/// tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    /// Inclusive lower edge of each bin.
    pub bin_edges: Vec<u64>,
}

pub fn chi_square_homogeneity(a: &[u64], b: &[u64], min_pooled: usize) -> ChiSquare {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let mut values: Vec<u64> = a.iter().chain(&b).copied().collect();
    values.sort_unstable();

    // Bin edges from the pooled sample, then merge a short final bin.
    let mut edges = Vec::new();
    let mut start = 0;
    while start < values.len() {
        edges.push(values[start]);
        let mut end = start + min_pooled.max(1);
        if end >= values.len() {
            break;
        }
        let v = values[end - 1];
        while end < values.len() && values[end] == v {
            end += 1;
        }
        start = end;
    }
    if edges.len() > 1 {
        let last = *edges.last().unwrap();
        let tail = values.len() - values.partition_point(|&v| v < last);
        if tail < min_pooled {
            edges.pop();
        }
    }

    let counts = |sample: &[u64]| -> Vec<f64> {
        let mut c = alloc::vec![0.0; edges.len()];
        for &v in sample {
            let bin = edges.partition_point(|&e| e <= v).saturating_sub(1);
            c[bin] += 1.0;
        }
        c
    };
    let ca = counts(&a);
    let cb = counts(&b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let mut statistic = 0.0;
    for k in 0..edges.len() {
        let pooled = ca[k] + cb[k];
        let ea = pooled * na / total;
        let eb = pooled * nb / total;
        if ea > 0.0 {
            statistic += (ca[k] - ea) * (ca[k] - ea) / ea;
        }
        if eb > 0.0 {
            statistic += (cb[k] - eb) * (cb[k] - eb) / eb;
        }
    }
    ChiSquare {
        statistic,
        dof: edges.len().saturating_sub(1),
        bin_edges: edges,
    }
}

/// Chi-square goodness of fit of observed integer counts against expected
/// probabilities `probs[k]` for value `k`; the mass beyond `probs.len()` is
/// one extra tail cell. Cells with expected count below `min_expected` are
/// merged into their right neighbour.
pub fn chi_square_goodness_of_fit(observed: &[u64], probs: &[f64], min_expected: f64) -> ChiSquare {
    let n = observed.len() as f64;
    let mut cell_obs = alloc::vec![0.0; probs.len() + 1];
    for &v in observed {
        let k = (v as usize).min(probs.len());
        cell_obs[k] += 1.0;
    }
    let mut cell_exp: Vec<f64> = probs.iter().map(|p| p * n).collect();
    let covered: f64 = probs.iter().sum();
    cell_exp.push((1.0 - covered).max(0.0) * n);

    let mut statistic = 0.0;
    let mut edges = Vec::new();
    let (mut acc_o, mut acc_e) = (0.0, 0.0);
    let mut edge = 0u64;
    let cells = cell_obs.len();
    for k in 0..cells {
        if acc_e == 0.0 && acc_o == 0.0 {
            edge = k as u64;
        }
        acc_o += cell_obs[k];
        acc_e += cell_exp[k];
        let rest: f64 = cell_exp[k + 1..].iter().sum();
        if acc_e >= min_expected && (rest >= min_expected || k + 1 == cells) {
            statistic += (acc_o - acc_e) * (acc_o - acc_e) / acc_e;
            edges.push(edge);
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 {
        statistic += (acc_o - acc_e) * (acc_o - acc_e) / acc_e;
        edges.push(edge);
    }
    ChiSquare {
        statistic,
        dof: edges.len().saturating_sub(1),
        bin_edges: edges,
    }
}
