use std::fmt::Write as _;

use polya_contact_core::contact::{is_lit, lit_threshold, Init, Simulation, Step};
use polya_contact_core::MultiGraph;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::{Report, VERSION};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::fit::Estimate;
use crate::rng::{par_replicas, replica_rng, tag};

/// Infects `ceil(deg(v) * lambda / (16e))` distinct neighbours of `v`
/// chosen uniformly, which makes `v` lit.
pub fn seed_lit<R: Rng + ?Sized>(graph: &MultiGraph, v: usize, lambda: f64, rng: &mut R) -> Vec<usize> {
    // expand multi-edges so each neighbour slot is equally likely
    let slots: Vec<usize> = graph
        .neighbors(v)
        .iter()
        .flat_map(|&(u, mult)| std::iter::repeat_n(u as usize, mult as usize))
        .collect();
    let k = ((slots.len() as f64 * lit_threshold(lambda)).ceil() as usize).min(slots.len());
    let mut chosen: Vec<usize> = sample(rng, slots.len(), k).into_iter().map(|i| slots[i]).collect();
    chosen.sort_unstable();
    chosen.dedup();
    chosen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Transfer {
    Lit,
    Extinct,
    Timeout,
    Capped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LitRow {
    pub lambda: f64,
    pub leaf_count: u64,
    pub trials: usize,
    pub transfers: usize,
    pub extinct: usize,
    pub timeouts: usize,
    pub capped: usize,
    /// Transfer frequency over trials not stopped by the event cap.
    pub estimate: Estimate,
    /// Mean time until the far centre is lit, over successful trials.
    pub mean_transfer_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LitTransferReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub horizon: f64,
    pub rows: Vec<LitRow>,
}

fn transfer_trial<R: Rng + ?Sized>(
    graph: &MultiGraph,
    w: usize,
    lambda: f64,
    horizon: f64,
    event_cap: u64,
    rng: &mut R,
) -> Result<(Transfer, f64)> {
    let seeds = seed_lit(graph, 0, lambda, rng);
    let mut sim = Simulation::new(graph, lambda, &Init::Set(seeds))?;
    loop {
        if is_lit(sim.state(), graph, w, lambda) {
            return Ok((Transfer::Lit, sim.time()));
        }
        if sim.events() >= event_cap {
            return Ok((Transfer::Capped, sim.time()));
        }
        match sim.step_until(horizon, rng) {
            Step::Event(_) => {}
            Step::Absorbed => return Ok((Transfer::Extinct, sim.time())),
            Step::Horizon => return Ok((Transfer::Timeout, horizon)),
        }
    }
}

/// Two stars joined by a path of `distance` edges; the first centre starts
/// lit and each trial records whether the second centre becomes lit before
/// the horizon.
pub fn run_lit_transfer(config: &ExperimentConfig) -> Result<LitTransferReport> {
    if config.kind != ExperimentKind::LitTransfer {
        return Err(Error::Config(format!("expected a lit transfer config, got {:?}", config.kind)));
    }
    config.validate()?;
    let horizon = config.time.resolve(2);
    let mut rows = Vec::new();
    for (li, &lambda) in config.lambdas.iter().enumerate() {
        for (si, &leaf_count) in config.leaf_counts.iter().enumerate() {
            let (graph, w) = MultiGraph::double_star(leaf_count as usize, config.distance);
            let stream = tag("lit-run").wrapping_add(((li as u64) << 32) | si as u64);
            let results = par_replicas(config.replicas, |i| {
                let mut rng = replica_rng(config.seed, stream, i as u64);
                transfer_trial(&graph, w, lambda, horizon, config.event_cap, &mut rng)
            });
            let results = results.into_iter().collect::<Result<Vec<_>>>()?;
            let count = |k: Transfer| results.iter().filter(|r| r.0 == k).count();
            let transfers = count(Transfer::Lit);
            let capped = count(Transfer::Capped);
            let times: Vec<f64> = results.iter().filter(|r| r.0 == Transfer::Lit).map(|r| r.1).collect();
            rows.push(LitRow {
                lambda,
                leaf_count,
                trials: results.len(),
                transfers,
                extinct: count(Transfer::Extinct),
                timeouts: count(Transfer::Timeout),
                capped,
                estimate: Estimate::of_proportion(transfers as u64, (results.len() - capped) as u64),
                mean_transfer_time: (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64),
            });
        }
    }
    Ok(LitTransferReport { version: VERSION.into(), config: config.clone(), horizon, rows })
}

impl Report for LitTransferReport {
    fn stem(&self) -> &'static str {
        "lit_transfer"
    }

    fn csv(&self) -> String {
        let mut s = String::from("lambda,leaf_count,trials,transfers,extinct,timeouts,capped,frequency,std_error\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.lambda, r.leaf_count, r.trials, r.transfers, r.extinct, r.timeouts, r.capped, r.estimate.mean, r.estimate.std_error
            )
            .unwrap();
        }
        s
    }
}
