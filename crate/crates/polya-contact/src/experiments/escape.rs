use std::fmt::Write as _;

use polya_contact_core::contact::{escape_trial, EscapeResult};
use polya_contact_core::locallimit::sample_ppt;
use polya_contact_core::Constants;
use serde::Serialize;

use super::{Report, VERSION};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::fit::{fit_scaling, Estimate, ScalingFit};
use crate::rng::{par_replicas, replica_rng, tag};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapePoint {
    pub lambda: f64,
    pub trials: usize,
    pub escaped: usize,
    pub extinct: usize,
    pub capped: usize,
    /// Escape frequency over trials that were not capped.
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeSweepReport {
    pub version: String,
    pub config: ExperimentConfig,
    /// Trees whose offspring count was cut at the degree cap above depth `radius + 1`.
    pub truncated_trees: usize,
    pub truncation_frequency: f64,
    pub points: Vec<EscapePoint>,
    pub fit: Option<ScalingFit>,
    pub fit_error: Option<String>,
}

/// One Pólya-point tree per replica, sampled to depth `radius + 1` and
/// shared by every lambda; escape trial from the infected root.
pub fn run_escape_sweep(config: &ExperimentConfig) -> Result<EscapeSweepReport> {
    if config.kind != ExperimentKind::EscapeSweep {
        return Err(Error::Config(format!("expected an escape sweep config, got {:?}", config.kind)));
    }
    config.validate()?;
    let constants = Constants::new(config.m, config.alpha)?;
    let depth = config.radius + 1;
    let run_tag = tag("escape-run");
    let per_replica: Vec<Result<(bool, Vec<EscapeResult>)>> = par_replicas(config.replicas, |i| {
        let mut rng = replica_rng(config.seed, tag("escape-tree"), i as u64);
        let ppt = sample_ppt(&constants, depth, config.degree_cap, &mut rng)?;
        let truncated = ppt.tree.truncated_within(depth);
        let results = config
            .lambdas
            .iter()
            .enumerate()
            .map(|(li, &lambda)| {
                let mut rng = replica_rng(config.seed, run_tag.wrapping_add(li as u64), i as u64);
                escape_trial(&ppt.tree, config.radius, lambda, config.event_cap, &mut rng).map_err(Error::from)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((truncated, results))
    });
    let per_replica: Vec<(bool, Vec<EscapeResult>)> = per_replica.into_iter().collect::<Result<_>>()?;

    let truncated_trees = per_replica.iter().filter(|r| r.0).count();
    let points: Vec<EscapePoint> = config
        .lambdas
        .iter()
        .enumerate()
        .map(|(li, &lambda)| {
            let count = |k: EscapeResult| per_replica.iter().filter(|r| r.1[li] == k).count();
            let (escaped, extinct, capped) = (count(EscapeResult::Escaped), count(EscapeResult::Extinct), count(EscapeResult::Capped));
            EscapePoint {
                lambda,
                trials: per_replica.len(),
                escaped,
                extinct,
                capped,
                estimate: Estimate::of_proportion(escaped as u64, (escaped + extinct) as u64),
            }
        })
        .collect();

    let lambdas: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let freqs: Vec<f64> = points.iter().map(|p| p.estimate.mean).collect();
    let (fit, fit_error) = match fit_scaling(&lambdas, &freqs, constants.psi) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(EscapeSweepReport {
        version: VERSION.into(),
        config: config.clone(),
        truncated_trees,
        truncation_frequency: truncated_trees as f64 / config.replicas as f64,
        points,
        fit,
        fit_error,
    })
}

impl Report for EscapeSweepReport {
    fn stem(&self) -> &'static str {
        "escape_sweep"
    }

    fn csv(&self) -> String {
        let mut s = String::from("lambda,trials,escaped,extinct,capped,frequency,std_error\n");
        for p in &self.points {
            writeln!(s, "{},{},{},{},{},{},{}", p.lambda, p.trials, p.escaped, p.extinct, p.capped, p.estimate.mean, p.estimate.std_error)
                .unwrap();
        }
        s
    }
}
