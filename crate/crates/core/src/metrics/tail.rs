use alloc::vec::Vec;

use crate::math::{ln, sqrt};
use crate::stats::line_fit;
use crate::{Error, MultiGraph, Result};

pub const MIN_DISTINCT_DEGREES: usize = 10;

/// Number of log-spaced evaluation points for the least-squares fit.
const GRID_POINTS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailEstimator {
    /// Least squares of `ln P(deg >= d)` on `ln d` over a log-spaced grid.
    LogLogLs,
    /// Discrete Hill estimator above `d_min`, reported as a survival slope.
    Hill,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    pub fit_range: (u64, u64),
    /// Slope of the survival function; `-(nu - 1)` for a power law with
    /// density exponent `nu`.
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    /// `None` for the Hill estimator.
    pub r_squared: Option<f64>,
    pub estimator: TailEstimator,
    pub points: usize,
}

pub fn degree_tail_fit(graph: &MultiGraph, range: (u64, u64), estimator: TailEstimator) -> Result<TailFit> {
    tail_fit(graph.degrees(), range, estimator)
}

/// Tail fit for any sample of positive integers.
pub fn tail_fit(values: &[u64], range: (u64, u64), estimator: TailEstimator) -> Result<TailFit> {
    let (d_min, d_max) = range;
    if !(d_min >= 1 && d_min < d_max) {
        return Err(Error::out_of_range("d_min", d_min as f64, "1 <= d_min < d_max"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let lo = sorted.partition_point(|&d| d < d_min);
    let hi = sorted.partition_point(|&d| d <= d_max);
    let mut distinct = sorted[lo..hi].to_vec();
    distinct.dedup();
    if distinct.len() < MIN_DISTINCT_DEGREES {
        return Err(Error::InsufficientRange { distinct: distinct.len(), required: MIN_DISTINCT_DEGREES });
    }
    let n = sorted.len() as f64;
    match estimator {
        TailEstimator::LogLogLs => {
            let (a, b) = (ln(d_min as f64), ln(d_max as f64));
            let mut grid: Vec<u64> = (0..GRID_POINTS)
                .map(|i| libm::round(crate::math::exp(a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64)) as u64)
                .collect();
            grid.dedup();
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for d in grid {
                let at_least = sorted.len() - sorted.partition_point(|&v| v < d);
                if at_least > 0 {
                    xs.push(ln(d as f64));
                    ys.push(ln(at_least as f64 / n));
                }
            }
            if xs.len() < 3 {
                return Err(Error::TooFewPoints { got: xs.len(), required: 3 });
            }
            let fit = line_fit(&xs, &ys)?;
            Ok(TailFit {
                fit_range: range,
                slope: fit.slope,
                intercept: fit.intercept,
                slope_se: fit.slope_se,
                r_squared: Some(fit.r_squared),
                estimator,
                points: xs.len(),
            })
        }
        TailEstimator::Hill => {
            // continuity correction for integer data
            let threshold = d_min as f64 - 0.5;
            let tail = &sorted[lo..];
            let k = tail.len() as f64;
            let sum: f64 = tail.iter().map(|&d| ln(d as f64 / threshold)).sum();
            let index = k / sum;
            Ok(TailFit {
                fit_range: range,
                slope: -index,
                intercept: ln(k / n) + index * ln(threshold),
                slope_se: index / sqrt(k),
                r_squared: None,
                estimator,
                points: tail.len(),
            })
        }
    }
}
