use std::fmt::Write as _;

use polya_contact_core::contact::{gillespie_run, ContactConfig, Init};
use polya_contact_core::MultiGraph;
use serde::Serialize;

use super::{Report, VERSION};
use crate::error::{Error, Result};
use crate::fit::Estimate;
use crate::rng::{par_replicas, replica_rng, tag};

/// Parameters of a batch of contact runs on a fixed graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateSpec {
    pub lambda: f64,
    pub t_max: f64,
    pub event_cap: u64,
    pub observe_times: Vec<f64>,
    /// `full`, `single:<v>` (0-based) or `set:<v>,<v>,...`.
    pub init: String,
    pub replicas: usize,
    pub seed: u64,
}

pub fn parse_init(text: &str, n: usize) -> Result<Init> {
    let bad = || Error::Config(format!("init {text:?}: expected full, single:<v> or set:<v>,<v>,..."));
    let vertex = |s: &str| -> Result<usize> {
        let v: usize = s.trim().parse().map_err(|_| bad())?;
        if v >= n {
            return Err(Error::Config(format!("init vertex {v} out of range for n={n}")));
        }
        Ok(v)
    };
    match text.split_once(':') {
        None if text == "full" => Ok(Init::Full),
        Some(("single", v)) => Ok(Init::Single(vertex(v)?)),
        Some(("set", list)) => Ok(Init::Set(list.split(',').map(vertex).collect::<Result<_>>()?)),
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub extinct: bool,
    pub extinction_time: Option<f64>,
    pub final_time: f64,
    pub final_count: usize,
    pub events_used: u64,
    pub capped: bool,
    pub observations: Vec<(f64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub version: String,
    pub spec: SimulateSpec,
    pub n: usize,
    /// Fraction of runs still alive at `t_max`, over runs that were not capped.
    pub survival: Estimate,
    /// Density at `t_max` over runs that were not capped.
    pub density: Estimate,
    pub extinct_runs: usize,
    pub capped_runs: usize,
    pub runs: Vec<RunSummary>,
}

pub fn simulate_graph(graph: &MultiGraph, spec: &SimulateSpec) -> Result<SimulateReport> {
    if spec.replicas < 1 {
        return Err(Error::Config("replicas must be at least 1".into()));
    }
    let init = parse_init(&spec.init, graph.vertex_count())?;
    let config = ContactConfig::new(spec.lambda, spec.t_max, spec.event_cap)?.with_observations(spec.observe_times.clone())?;
    let runs = par_replicas(spec.replicas, |i| {
        gillespie_run(graph, &init, &config, &mut replica_rng(spec.seed, tag("simulate"), i as u64))
    })
    .into_iter()
    .collect::<polya_contact_core::Result<Vec<_>>>()?;
    let n = graph.vertex_count();
    let done: Vec<_> = runs.iter().filter(|r| !r.capped).collect();
    let alive = done.iter().filter(|r| r.final_count > 0).count();
    let densities: Vec<f64> = done.iter().map(|r| r.final_count as f64 / n as f64).collect();
    Ok(SimulateReport {
        version: VERSION.into(),
        spec: spec.clone(),
        n,
        survival: Estimate::of_proportion(alive as u64, done.len() as u64),
        density: Estimate::of(&densities),
        extinct_runs: runs.iter().filter(|r| r.extinct).count(),
        capped_runs: runs.len() - done.len(),
        runs: runs
            .into_iter()
            .map(|r| RunSummary {
                extinct: r.extinct,
                extinction_time: r.extinction_time,
                final_time: r.final_time,
                final_count: r.final_count,
                events_used: r.events_used,
                capped: r.capped,
                observations: r.observations,
            })
            .collect(),
    })
}

impl Report for SimulateReport {
    fn stem(&self) -> &'static str {
        "simulate"
    }

    /// `replica,time,infected_count` for every observation.
    fn csv(&self) -> String {
        let mut s = String::from("replica,time,infected_count\n");
        for (i, r) in self.runs.iter().enumerate() {
            for &(t, c) in &r.observations {
                writeln!(s, "{i},{t},{c}").unwrap();
            }
        }
        s
    }
}
