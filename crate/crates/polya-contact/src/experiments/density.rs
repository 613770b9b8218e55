use std::fmt::Write as _;

use polya_contact_core::contact::{gillespie_run, ContactConfig, Init};
use polya_contact_core::graphgen::{build_polya_graph, sample_weights};
use polya_contact_core::Constants;
use serde::Serialize;

use super::{Report, VERSION};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::fit::{fit_scaling, Estimate, Quantiles, ScalingFit};
use crate::rng::{par_replicas, replica_rng, tag};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservedDensity {
    pub time: f64,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityPoint {
    pub lambda: f64,
    pub t: f64,
    /// Mean of `|xi_t| / n` over replicas that were not capped.
    pub estimate: Estimate,
    pub quantiles: Quantiles,
    pub positive_replicas: usize,
    pub extinct_replicas: usize,
    pub capped_replicas: usize,
    pub observed: Vec<ObservedDensity>,
    /// Per-replica density at `t`; `None` for capped runs.
    pub densities: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub points: Vec<DensityPoint>,
}

struct ReplicaRun {
    /// Density at each observation time, the last being `t`.
    densities: Vec<f64>,
    extinct: bool,
    capped: bool,
}

fn check_kind(config: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if config.kind != kind {
        return Err(Error::Config(format!("expected a {kind:?} config, got {:?}", config.kind)));
    }
    config.validate()
}

fn density_points(config: &ExperimentConfig) -> Result<Vec<DensityPoint>> {
    let constants = Constants::new(config.m, config.alpha)?;
    let n = config.n;
    let t = config.time.resolve(n);
    let mut times = config.observe_times.clone();
    if times.last() != Some(&t) {
        times.push(t);
    }
    let run_tag = tag("density-run");
    let per_replica: Vec<Result<Vec<ReplicaRun>>> = par_replicas(config.replicas, |i| {
        let mut rng = replica_rng(config.seed, tag("density-graph"), i as u64);
        let weights = sample_weights(n, &constants, &mut rng)?;
        let graph = build_polya_graph(&weights, &constants, &mut rng);
        config
            .lambdas
            .iter()
            .enumerate()
            .map(|(li, &lambda)| {
                let mut rng = replica_rng(config.seed, run_tag.wrapping_add(li as u64), i as u64);
                let cc = ContactConfig::new(lambda, t, config.event_cap)?.with_observations(times.clone())?;
                let out = gillespie_run(&graph, &Init::Full, &cc, &mut rng)?;
                Ok(ReplicaRun {
                    densities: out.observations.iter().map(|&(_, c)| c as f64 / n as f64).collect(),
                    extinct: out.extinct,
                    capped: out.capped,
                })
            })
            .collect()
    });
    let per_replica: Vec<Vec<ReplicaRun>> = per_replica.into_iter().collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(config.lambdas.len());
    for (li, &lambda) in config.lambdas.iter().enumerate() {
        let runs: Vec<&ReplicaRun> = per_replica.iter().map(|r| &r[li]).collect();
        let done: Vec<&ReplicaRun> = runs.iter().copied().filter(|r| !r.capped).collect();
        let at_t: Vec<f64> = done.iter().map(|r| *r.densities.last().unwrap()).collect();
        let observed = (0..times.len())
            .map(|k| ObservedDensity { time: times[k], estimate: Estimate::of(&done.iter().map(|r| r.densities[k]).collect::<Vec<_>>()) })
            .collect();
        points.push(DensityPoint {
            lambda,
            t,
            estimate: Estimate::of(&at_t),
            quantiles: Quantiles::of(&at_t),
            positive_replicas: at_t.iter().filter(|&&d| d > 0.0).count(),
            extinct_replicas: runs.iter().filter(|r| r.extinct).count(),
            capped_replicas: runs.iter().filter(|r| r.capped).count(),
            observed,
            densities: runs.iter().map(|r| (!r.capped).then(|| *r.densities.last().unwrap())).collect(),
        });
    }
    Ok(points)
}

/// Fresh graph per replica, contact process from full occupancy, density
/// recorded at the configured times.
pub fn run_density_experiment(config: &ExperimentConfig) -> Result<DensityReport> {
    check_kind(config, ExperimentKind::Density)?;
    Ok(DensityReport { version: VERSION.into(), config: config.clone(), points: density_points(config)? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaSweepReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub points: Vec<DensityPoint>,
    pub fit: Option<ScalingFit>,
    pub fit_error: Option<String>,
}

/// Density experiment over the lambda grid followed by the scaling fits.
pub fn run_lambda_sweep(config: &ExperimentConfig) -> Result<LambdaSweepReport> {
    check_kind(config, ExperimentKind::LambdaSweep)?;
    let points = density_points(config)?;
    let psi = Constants::new(config.m, config.alpha)?.psi;
    let lambdas: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let means: Vec<f64> = points.iter().map(|p| p.estimate.mean).collect();
    let (fit, fit_error) = match fit_scaling(&lambdas, &means, psi) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(LambdaSweepReport { version: VERSION.into(), config: config.clone(), points, fit, fit_error })
}

fn points_csv(points: &[DensityPoint]) -> String {
    let mut s = String::from("lambda,replica,density\n");
    for p in points {
        for (i, d) in p.densities.iter().enumerate() {
            match d {
                Some(d) => writeln!(s, "{},{i},{d}", p.lambda),
                None => writeln!(s, "{},{i},capped", p.lambda),
            }
            .unwrap();
        }
    }
    s
}

impl Report for DensityReport {
    fn stem(&self) -> &'static str {
        "density"
    }

    fn csv(&self) -> String {
        points_csv(&self.points)
    }
}

impl Report for LambdaSweepReport {
    fn stem(&self) -> &'static str {
        "lambda_sweep"
    }

    fn csv(&self) -> String {
        points_csv(&self.points)
    }
}
