use std::fmt::Write as _;

use polya_contact_core::contact::star_survival_trial_until;
use polya_contact_core::oracle::star_expected_extinction_time;
use polya_contact_core::stats::{line_fit, pearson, quantile_sorted};
use serde::Serialize;

use super::{Report, VERSION};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::rng::{par_replicas, replica_rng, tag};

/// Largest star for which the exact mean extinction time is computed.
pub const EXACT_MEAN_LIMIT: u64 = 500;

/// Sample median of extinction times when some runs were stopped at the
/// horizon. Stopped runs contribute their stopping time, which is a lower
/// bound for their extinction time, so `value` is always a lower bound for
/// the sample median and equals it when `exact`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CensoredMedian {
    pub value: f64,
    pub exact: bool,
}

/// `times[i]` is the extinction time, or the stopping time if
/// `censored[i]`.
pub fn censored_median(times: &[f64], censored: &[bool]) -> CensoredMedian {
    let mut pairs: Vec<(f64, bool)> = times.iter().copied().zip(censored.iter().copied()).collect();
    // censored values sort after equal uncensored ones
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let sorted: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let value = quantile_sorted(&sorted, 0.5);
    // the median only uses order statistics up to the upper middle one
    let upper = sorted.len() / 2;
    let exact = !pairs.is_empty() && pairs[..=upper].iter().all(|p| !p.1);
    CensoredMedian { value, exact }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarRow {
    pub lambda: f64,
    pub leaf_count: u64,
    pub runs: usize,
    pub extinct: usize,
    /// Runs stopped by the horizon or the event cap.
    pub censored: usize,
    pub median: CensoredMedian,
    pub log_median: f64,
    /// Quartiles of the recorded times, lower bounds where censored.
    pub q25: f64,
    pub q75: f64,
    pub exact_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarScalingReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub horizon: f64,
    pub rows: Vec<StarRow>,
    /// Line fit of log-median against `lambda^2 * size` over rows with an
    /// exact median.
    pub fit_slope: Option<f64>,
    pub fit_intercept: Option<f64>,
    /// Correlation of log-median with `lambda^2 * size` over rows with an
    /// exact median.
    pub correlation: Option<f64>,
    pub exact_rows: usize,
}

/// Star with the centre initially infected, run to extinction or the
/// configured horizon, for every (lambda, leaf count).
pub fn run_star_scaling(config: &ExperimentConfig) -> Result<StarScalingReport> {
    if config.kind != ExperimentKind::StarScaling {
        return Err(Error::Config(format!("expected a star scaling config, got {:?}", config.kind)));
    }
    config.validate()?;
    let horizon = config.time.resolve(2);
    let mut rows = Vec::new();
    for (li, &lambda) in config.lambdas.iter().enumerate() {
        for (si, &leaf_count) in config.leaf_counts.iter().enumerate() {
            let stream = tag("star-run").wrapping_add(((li as u64) << 32) | si as u64);
            let outcomes = par_replicas(config.replicas, |i| {
                let mut rng = replica_rng(config.seed, stream, i as u64);
                star_survival_trial_until(leaf_count, lambda, horizon, config.event_cap, &mut rng)
            });
            let outcomes = outcomes.into_iter().collect::<polya_contact_core::Result<Vec<_>>>()?;
            let times: Vec<f64> = outcomes.iter().map(|o| o.extinction_time.unwrap_or(o.final_time)).collect();
            let censored: Vec<bool> = outcomes.iter().map(|o| o.capped).collect();
            let median = censored_median(&times, &censored);
            let mut sorted = times.clone();
            sorted.sort_by(f64::total_cmp);
            let exact_mean = if leaf_count <= EXACT_MEAN_LIMIT {
                Some(star_expected_extinction_time(leaf_count as usize, lambda)?)
            } else {
                None
            };
            let n_censored = censored.iter().filter(|&&c| c).count();
            rows.push(StarRow {
                lambda,
                leaf_count,
                runs: outcomes.len(),
                extinct: outcomes.len() - n_censored,
                censored: n_censored,
                median,
                log_median: median.value.ln(),
                q25: quantile_sorted(&sorted, 0.25),
                q75: quantile_sorted(&sorted, 0.75),
                exact_mean,
            });
        }
    }

    let exact: Vec<&StarRow> = rows.iter().filter(|r| r.median.exact).collect();
    let x: Vec<f64> = exact.iter().map(|r| r.lambda * r.lambda * r.leaf_count as f64).collect();
    let y: Vec<f64> = exact.iter().map(|r| r.log_median).collect();
    let line = if exact.len() >= 2 { line_fit(&x, &y).ok() } else { None };
    let correlation = if exact.len() >= 3 { Some(pearson(&x, &y)).filter(|c| c.is_finite()) } else { None };
    Ok(StarScalingReport {
        version: VERSION.into(),
        config: config.clone(),
        horizon,
        fit_slope: line.as_ref().map(|l| l.slope),
        fit_intercept: line.as_ref().map(|l| l.intercept),
        correlation,
        exact_rows: exact.len(),
        rows,
    })
}

impl Report for StarScalingReport {
    fn stem(&self) -> &'static str {
        "star_scaling"
    }

    fn csv(&self) -> String {
        let mut s = String::from("lambda,leaf_count,runs,censored,median,median_exact,log_median,exact_mean\n");
        for r in &self.rows {
            let mean = r.exact_mean.map(|m| m.to_string()).unwrap_or_default();
            writeln!(s, "{},{},{},{},{},{},{},{mean}", r.lambda, r.leaf_count, r.runs, r.censored, r.median.value, r.median.exact, r.log_median)
                .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_exactness() {
        let m = censored_median(&[1.0, 2.0, 3.0, 10.0, 10.0], &[false, false, false, true, true]);
        assert_eq!(m, CensoredMedian { value: 3.0, exact: true });
        let m = censored_median(&[1.0, 2.0, 10.0, 10.0], &[false, false, true, true]);
        assert_eq!(m.value, 6.0);
        assert!(!m.exact);
        let m = censored_median(&[1.0, 10.0, 10.0], &[false, true, true]);
        assert!(!m.exact);
    }
}
