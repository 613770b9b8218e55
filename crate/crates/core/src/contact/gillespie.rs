use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::state::{ContactState, Init};
use crate::{Error, MultiGraph, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ContactConfig {
    pub lambda: f64,
    /// Horizon; may be infinite when `event_cap` bounds the run.
    pub t_max: f64,
    pub event_cap: u64,
    /// Sorted times in `[0, t_max]` at which `|xi_t|` is recorded.
    pub observe_times: Vec<f64>,
}

impl ContactConfig {
    pub fn new(lambda: f64, t_max: f64, event_cap: u64) -> Result<Self> {
        let cfg = ContactConfig { lambda, t_max, event_cap, observe_times: Vec::new() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_observations(mut self, times: Vec<f64>) -> Result<Self> {
        self.observe_times = times;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::out_of_range("lambda", self.lambda, "finite lambda >= 0"));
        }
        if !(self.t_max >= 0.0) {
            return Err(Error::out_of_range("t_max", self.t_max, "t_max >= 0"));
        }
        let mut prev = 0.0;
        for &t in &self.observe_times {
            if !(t >= prev && t <= self.t_max) {
                return Err(Error::out_of_range("observe_times", t, "sorted times within [0, t_max]"));
            }
            prev = t;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub extinct: bool,
    pub extinction_time: Option<f64>,
    pub observations: Vec<(f64, usize)>,
    pub events_used: u64,
    pub capped: bool,
    /// Time at which the run stopped.
    pub final_time: f64,
    pub final_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    Recovery,
    Infection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub time: f64,
    pub vertex: usize,
    pub kind: TransitionKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Event(Transition),
    /// No infected vertices remain.
    Absorbed,
    /// The next event would fall after the time limit; the clock was set
    /// to the limit.
    Horizon,
}

/// Event-by-event Gillespie simulation on a fixed graph.
#[derive(Debug, Clone)]
pub struct Simulation<'g> {
    graph: &'g MultiGraph,
    state: ContactState,
    lambda: f64,
    time: f64,
    events: u64,
}

impl<'g> Simulation<'g> {
    pub fn new(graph: &'g MultiGraph, lambda: f64, init: &Init) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::out_of_range("lambda", lambda, "finite lambda >= 0"));
        }
        Ok(Simulation { graph, state: ContactState::new(graph, init)?, lambda, time: 0.0, events: 0 })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn state(&self) -> &ContactState {
        &self.state
    }

    pub fn graph(&self) -> &'g MultiGraph {
        self.graph
    }

    pub fn total_rate(&self) -> f64 {
        self.state.total_recovery_rate() + self.state.total_infection_rate(self.lambda)
    }

    /// Performs the next event unless it would occur after `limit`.
    pub fn step_until<R: Rng + ?Sized>(&mut self, limit: f64, rng: &mut R) -> Step {
        let recoveries = self.state.infected_count();
        if recoveries == 0 {
            return Step::Absorbed;
        }
        let pressure = self.state.healthy_pressure_total();
        let infection_rate = self.lambda * pressure as f64;
        let total = recoveries as f64 + infection_rate;
        let wait: f64 = Exp1.sample(rng);
        let next = self.time + wait / total;
        if next > limit {
            self.time = limit;
            return Step::Horizon;
        }
        self.time = next;
        self.events += 1;
        let (vertex, kind) = if rng.random::<f64>() * total < recoveries as f64 {
            let v = self.state.infected_at(rng.random_range(0..recoveries));
            self.state.recover(self.graph, v);
            (v, TransitionKind::Recovery)
        } else {
            let v = self.state.infection_target(rng.random_range(0..pressure));
            self.state.infect(self.graph, v);
            (v, TransitionKind::Infection)
        };
        Step::Event(Transition { time: next, vertex, kind })
    }
}

/// Runs the contact process from `init` until extinction, `t_max`, or
/// `event_cap` events, recording `|xi_t|` at the configured times.
pub fn gillespie_run<R: Rng + ?Sized>(
    graph: &MultiGraph,
    init: &Init,
    config: &ContactConfig,
    rng: &mut R,
) -> Result<Outcome> {
    config.validate()?;
    let mut sim = Simulation::new(graph, config.lambda, init)?;
    let obs = &config.observe_times;
    let mut observations = Vec::with_capacity(obs.len());
    let mut capped = false;
    loop {
        if sim.events() >= config.event_cap && !sim.state().is_absorbed() {
            capped = true;
            break;
        }
        let before = sim.state().infected_count();
        let step = sim.step_until(config.t_max, rng);
        // the count was `before` on [previous time, current time)
        while observations.len() < obs.len() && obs[observations.len()] < sim.time() {
            observations.push((obs[observations.len()], before));
        }
        match step {
            Step::Event(_) => {}
            Step::Absorbed | Step::Horizon => break,
        }
    }
    let count = sim.state().infected_count();
    let extinct = count == 0;
    if !capped {
        while observations.len() < obs.len() {
            observations.push((obs[observations.len()], count));
        }
    }
    Ok(Outcome {
        extinct,
        extinction_time: extinct.then_some(sim.time()),
        observations,
        events_used: sim.events(),
        capped,
        final_time: sim.time(),
        final_count: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Summary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn config_validation() {
        assert!(ContactConfig::new(-1.0, 1.0, 10).is_err());
        assert!(ContactConfig::new(1.0, f64::NAN, 10).is_err());
        assert!(ContactConfig::new(1.0, f64::INFINITY, 10).is_ok());
        let c = ContactConfig::new(1.0, 2.0, 10).unwrap();
        assert!(c.clone().with_observations(alloc::vec![0.5, 0.2]).is_err());
        assert!(c.clone().with_observations(alloc::vec![0.5, 3.0]).is_err());
        assert!(c.with_observations(alloc::vec![0.0, 0.5, 2.0]).is_ok());
    }

    #[test]
    fn isolated_vertex_survival() {
        let g = MultiGraph::from_edges(1, core::iter::empty()).unwrap();
        let cfg = ContactConfig::new(3.0, 1.0, u64::MAX).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let alive = (0..n)
            .filter(|_| !gillespie_run(&g, &Init::Full, &cfg, &mut rng).unwrap().extinct)
            .count();
        let s = Summary::of_proportion(alive as u64, n as u64);
        let expect = libm::exp(-1.0);
        assert!((s.mean - expect).abs() < 3.0 * s.std_error, "{} vs {expect}", s.mean);
    }

    #[test]
    fn edge_mean_extinction() {
        let g = MultiGraph::path(2);
        let cfg = ContactConfig::new(1.0, f64::INFINITY, u64::MAX).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let times: Vec<f64> = (0..100_000)
            .map(|_| gillespie_run(&g, &Init::Full, &cfg, &mut rng).unwrap().extinction_time.unwrap())
            .collect();
        let s = Summary::of(&times);
        assert!((s.mean - 2.0).abs() < 3.0 * s.std_error, "{}", s.mean);
    }

    #[test]
    fn observations_step_by_one() {
        let g = MultiGraph::star(20);
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
        let cfg = ContactConfig::new(1.5, 20.0, u64::MAX).unwrap().with_observations(times.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // record every event through the stepping API and check +-1 jumps
        let mut sim = Simulation::new(&g, 1.5, &Init::Single(0)).unwrap();
        let mut prev = 1i64;
        while let Step::Event(_) = sim.step_until(20.0, &mut rng) {
            let now = sim.state().infected_count() as i64;
            assert_eq!((now - prev).abs(), 1);
            prev = now;
        }
        let out = gillespie_run(&g, &Init::Full, &cfg, &mut rng).unwrap();
        assert_eq!(out.observations.len(), times.len());
        assert_eq!(out.observations[0], (0.0, 21));
        if let Some(te) = out.extinction_time {
            assert!(out.observations.iter().filter(|o| o.0 >= te).all(|o| o.1 == 0));
        }
    }

    #[test]
    fn event_cap_flags() {
        let g = MultiGraph::complete(10);
        let cfg = ContactConfig::new(5.0, f64::INFINITY, 1000)
            .unwrap()
            .with_observations(alloc::vec![1e9])
            .unwrap();
        let out = gillespie_run(&g, &Init::Full, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert!(out.capped && !out.extinct);
        assert_eq!(out.events_used, 1000);
        assert!(out.observations.is_empty());
    }

    #[test]
    fn bookkeeping_survives_long_runs() {
        let c = crate::Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = crate::graphgen::sample_weights(2_000, &c, &mut rng).unwrap();
        let g = crate::graphgen::build_polya_graph(&w, &c, &mut rng);
        let mut sim = Simulation::new(&g, 0.4, &Init::Full).unwrap();
        for _ in 0..20 {
            for _ in 0..10_000 {
                if !matches!(sim.step_until(f64::INFINITY, &mut rng), Step::Event(_)) {
                    break;
                }
            }
            assert!(sim.state().is_consistent(&g));
        }
    }

    #[test]
    fn lambda_zero_is_pure_death() {
        let g = MultiGraph::complete(5);
        let mut sim = Simulation::new(&g, 0.0, &Init::Full).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        while let Step::Event(t) = sim.step_until(f64::INFINITY, &mut rng) {
            assert_eq!(t.kind, TransitionKind::Recovery);
        }
    }
}
