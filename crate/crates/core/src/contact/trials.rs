use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::gillespie::{Simulation, Step, TransitionKind};
use super::state::Init;
use crate::{Error, Result, Tree};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarOutcome {
    pub extinction_time: Option<f64>,
    /// Time reached when the run stopped.
    pub final_time: f64,
    pub events_used: u64,
    /// Stopped by the event cap or the horizon before extinction.
    pub capped: bool,
}

/// Contact process on a star with `leaf_count` leaves, centre initially
/// infected, run until extinction or `event_cap` events.
pub fn star_survival_trial<R: Rng + ?Sized>(
    leaf_count: u64,
    lambda: f64,
    event_cap: u64,
    rng: &mut R,
) -> Result<StarOutcome> {
    star_survival_trial_until(leaf_count, lambda, f64::INFINITY, event_cap, rng)
}

/// As [`star_survival_trial`] with an additional time horizon.
///
/// Leaves are exchangeable, so the chain is simulated on (centre state,
/// number of infected leaves); each event costs O(1) regardless of size.
pub fn star_survival_trial_until<R: Rng + ?Sized>(
    leaf_count: u64,
    lambda: f64,
    t_max: f64,
    event_cap: u64,
    rng: &mut R,
) -> Result<StarOutcome> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::out_of_range("lambda", lambda, "finite lambda >= 0"));
    }
    let n = leaf_count as f64;
    let mut centre = true;
    let mut leaves = 0u64;
    let mut time = 0.0;
    let mut events = 0u64;
    while centre || leaves > 0 {
        if events >= event_cap {
            return Ok(StarOutcome { extinction_time: None, final_time: time, events_used: events, capped: true });
        }
        let k = leaves as f64;
        let (centre_rate, leaf_infection) = if centre { (1.0, lambda * (n - k)) } else { (lambda * k, 0.0) };
        let total = centre_rate + k + leaf_infection;
        let wait: f64 = Exp1.sample(rng);
        let next = time + wait / total;
        if next > t_max {
            return Ok(StarOutcome { extinction_time: None, final_time: t_max, events_used: events, capped: true });
        }
        time = next;
        events += 1;
        let u = rng.random::<f64>() * total;
        if u < centre_rate {
            centre = !centre;
        } else if u < centre_rate + k {
            leaves -= 1;
        } else {
            leaves += 1;
        }
    }
    Ok(StarOutcome { extinction_time: Some(time), final_time: time, events_used: events, capped: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EscapeResult {
    /// A vertex at depth `radius + 1` was infected.
    Escaped,
    /// The infection died out inside the ball.
    Extinct,
    /// The event cap was reached first; the trial is indeterminate.
    Capped,
}

/// Contact process on a tree from the infected root, stopped at the first
/// infection of a vertex at depth `radius + 1` or at extinction.
pub fn escape_trial<R: Rng + ?Sized>(
    tree: &Tree,
    radius: usize,
    lambda: f64,
    event_cap: u64,
    rng: &mut R,
) -> Result<EscapeResult> {
    if tree.sampled_depth() < radius + 1 {
        return Err(Error::TreeTooShallow { depth: tree.sampled_depth(), required: radius + 1 });
    }
    let graph = tree.to_graph(radius + 1);
    let frontier = tree.ball_size(radius);
    let mut sim = Simulation::new(&graph, lambda, &Init::Single(0))?;
    loop {
        if sim.events() >= event_cap {
            return Ok(EscapeResult::Capped);
        }
        match sim.step_until(f64::INFINITY, rng) {
            Step::Event(t) if t.kind == TransitionKind::Infection && t.vertex >= frontier => {
                return Ok(EscapeResult::Escaped)
            }
            Step::Event(_) => {}
            Step::Absorbed | Step::Horizon => return Ok(EscapeResult::Extinct),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{gillespie_run, ContactConfig};
    use crate::locallimit::sample_ppt;
    use crate::stats::{ks_statistic, Summary};
    use crate::{Constants, MultiGraph};
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_star_is_exp_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let times: Vec<f64> = (0..100_000)
            .map(|_| star_survival_trial(0, 2.0, u64::MAX, &mut rng).unwrap().extinction_time.unwrap())
            .collect();
        let s = Summary::of(&times);
        assert!((s.mean - 1.0).abs() < 3.0 * s.std_error);
    }

    #[test]
    fn lumped_star_matches_generic_engine() {
        let (leaves, lambda) = (12usize, 0.8);
        let g = MultiGraph::star(leaves);
        let cfg = ContactConfig::new(lambda, f64::INFINITY, u64::MAX).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 20_000;
        let mut a: Vec<f64> = (0..n)
            .map(|_| star_survival_trial(leaves as u64, lambda, u64::MAX, &mut rng).unwrap().extinction_time.unwrap())
            .collect();
        let mut b: Vec<f64> = (0..n)
            .map(|_| gillespie_run(&g, &Init::Single(0), &cfg, &mut rng).unwrap().extinction_time.unwrap())
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let d = ks_statistic(&a, &b);
        assert!(d < 1.95 * libm::sqrt(2.0 / n as f64), "ks {d}");
    }

    #[test]
    fn star_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = star_survival_trial(500, 2.0, 1000, &mut rng).unwrap();
        assert!(out.capped && out.extinction_time.is_none());
        assert_eq!(out.events_used, 1000);
        let out = star_survival_trial_until(500, 2.0, 3.0, u64::MAX, &mut rng).unwrap();
        assert!(out.capped);
        assert_eq!(out.final_time, 3.0);
    }

    fn bare_star_tree(children: usize) -> Tree {
        let mut t = Tree::with_root(1);
        t.push_children(0, children, false);
        t
    }

    #[test]
    fn radius_zero_first_event_race() {
        let (c, lambda) = (4usize, 0.3);
        let tree = bare_star_tree(c);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000u64;
        let hits = (0..n)
            .filter(|_| escape_trial(&tree, 0, lambda, u64::MAX, &mut rng).unwrap() == EscapeResult::Escaped)
            .count();
        let s = Summary::of_proportion(hits as u64, n);
        let expect = 1.0 - 1.0 / (1.0 + lambda * c as f64);
        assert!((s.mean - expect).abs() < 3.0 * s.std_error, "{} vs {expect}", s.mean);
    }

    #[test]
    fn zero_lambda_never_escapes_and_shallow_rejected() {
        let tree = bare_star_tree(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert_eq!(escape_trial(&tree, 0, 0.0, u64::MAX, &mut rng).unwrap(), EscapeResult::Extinct);
        }
        assert!(matches!(escape_trial(&tree, 1, 1.0, 10, &mut rng), Err(Error::TreeTooShallow { .. })));
    }

    #[test]
    fn escape_frequency_monotone_in_lambda() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trees: Vec<_> = (0..2_000).map(|_| sample_ppt(&c, 3, 10_000, &mut rng).unwrap()).collect();
        let mut freqs = Vec::new();
        for &lambda in &[0.1, 0.2, 0.3] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut hits = 0u64;
            for t in &trees {
                for _ in 0..5 {
                    hits += (escape_trial(&t.tree, 2, lambda, 10_000_000, &mut rng).unwrap() == EscapeResult::Escaped) as u64;
                }
            }
            freqs.push(Summary::of_proportion(hits, trees.len() as u64 * 5));
        }
        for w in freqs.windows(2) {
            let se = libm::sqrt(w[0].std_error * w[0].std_error + w[1].std_error * w[1].std_error);
            assert!(w[1].mean >= w[0].mean - 3.0 * se, "{} then {}", w[0].mean, w[1].mean);
        }
    }

    #[test]
    fn large_lambda_escapes() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 500;
        let mut hits = 0;
        for _ in 0..n {
            let t = sample_ppt(&c, 3, 10_000, &mut rng).unwrap();
            hits += (escape_trial(&t.tree, 2, 5.0, 10_000_000, &mut rng).unwrap() == EscapeResult::Escaped) as usize;
        }
        assert!(hits as f64 / n as f64 > 0.9, "{hits}/{n}");
    }
}
