use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::{Error, MultiGraph, Result};

/// Default bound on the expected number of marks and arrows in a window.
pub const DEFAULT_WINDOW_LIMIT: f64 = 5e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimelineEvent {
    /// Recovery mark at a vertex.
    Mark { vertex: u32 },
    /// Infection arrow `from -> to`.
    Arrow { from: u32, to: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrowList {
    pub from: u32,
    pub to: u32,
    pub times: Vec<f64>,
}

/// Graphical representation on `[0, window]`: rate-1 recovery marks per
/// vertex, rate `lambda * multiplicity` arrows per direction of every edge,
/// and all of them merged in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTimeline {
    pub window: f64,
    pub vertex_count: usize,
    pub marks: Vec<Vec<f64>>,
    pub arrows: Vec<ArrowList>,
    pub events: Vec<(f64, TimelineEvent)>,
}

impl EventTimeline {
    /// Builds a timeline from explicit marks and arrows.
    pub fn from_parts(window: f64, marks: Vec<Vec<f64>>, arrows: Vec<ArrowList>) -> Self {
        let mut events = Vec::new();
        for (v, ts) in marks.iter().enumerate() {
            events.extend(ts.iter().map(|&t| (t, TimelineEvent::Mark { vertex: v as u32 })));
        }
        for a in &arrows {
            events.extend(a.times.iter().map(|&t| (t, TimelineEvent::Arrow { from: a.from, to: a.to })));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        EventTimeline { window, vertex_count: marks.len(), marks, arrows, events }
    }
}

fn poisson_times<R: Rng + ?Sized>(rate: f64, window: f64, rng: &mut R) -> Vec<f64> {
    let mean = rate * window;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("finite positive mean").sample(rng) as usize;
    let mut times: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * window).collect();
    times.sort_by(f64::total_cmp);
    times
}

pub fn graphical_window<R: Rng + ?Sized>(
    graph: &MultiGraph,
    lambda: f64,
    window: f64,
    rng: &mut R,
) -> Result<EventTimeline> {
    graphical_window_with_limit(graph, lambda, window, DEFAULT_WINDOW_LIMIT, rng)
}

pub fn graphical_window_with_limit<R: Rng + ?Sized>(
    graph: &MultiGraph,
    lambda: f64,
    window: f64,
    limit: f64,
    rng: &mut R,
) -> Result<EventTimeline> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::out_of_range("lambda", lambda, "finite lambda >= 0"));
    }
    if !(window >= 0.0 && window.is_finite()) {
        return Err(Error::out_of_range("window", window, "finite window >= 0"));
    }
    let n = graph.vertex_count();
    let expected = (n as f64 + 2.0 * lambda * graph.total_multiplicity() as f64) * window;
    if expected > limit {
        return Err(Error::WindowTooLarge { expected, limit });
    }
    let marks = (0..n).map(|_| poisson_times(1.0, window, rng)).collect();
    let mut arrows = Vec::with_capacity(2 * graph.edges().len());
    for e in graph.edges() {
        let rate = lambda * e.multiplicity as f64;
        for (from, to) in [(e.u, e.v), (e.v, e.u)] {
            arrows.push(ArrowList { from, to, times: poisson_times(rate, window, rng) });
        }
    }
    Ok(EventTimeline::from_parts(window, marks, arrows))
}

/// `(a, b)` where `a` counts vertices whose single-site process survives to
/// the end of the window (backward sweep over reversed arrows) and `b` is
/// the size at the end of the window of the process started from every
/// vertex (forward sweep).
pub fn slab_counts(timeline: &EventTimeline) -> (usize, usize) {
    let n = timeline.vertex_count;
    let mut alive = alloc::vec![true; n];
    for &(_, ev) in &timeline.events {
        match ev {
            TimelineEvent::Mark { vertex } => alive[vertex as usize] = false,
            TimelineEvent::Arrow { from, to } => {
                if alive[from as usize] {
                    alive[to as usize] = true;
                }
            }
        }
    }
    let b = alive.iter().filter(|&&x| x).count();

    alive.iter_mut().for_each(|x| *x = true);
    for &(_, ev) in timeline.events.iter().rev() {
        match ev {
            TimelineEvent::Mark { vertex } => alive[vertex as usize] = false,
            TimelineEvent::Arrow { from, to } => {
                if alive[to as usize] {
                    alive[from as usize] = true;
                }
            }
        }
    }
    let a = alive.iter().filter(|&&x| x).count();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Summary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_window() {
        let g = MultiGraph::star(4);
        let tl = graphical_window(&g, 1.0, 0.0, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(tl.events.is_empty());
        assert_eq!(slab_counts(&tl), (5, 5));
    }

    #[test]
    fn marks_only_kill_everything() {
        let marks = (0..4).map(|v| alloc::vec![0.1 * (v + 1) as f64]).collect();
        let tl = EventTimeline::from_parts(1.0, marks, Vec::new());
        assert_eq!(slab_counts(&tl), (0, 0));
    }

    #[test]
    fn directed_arrows_are_reversed_backward() {
        // 0 is marked at 0.2, arrow 1 -> 0 at 0.5, 1 marked at 0.7:
        // forward only 0 survives; backward only 1 survives
        let tl = EventTimeline::from_parts(
            1.0,
            alloc::vec![alloc::vec![0.2], alloc::vec![0.7]],
            alloc::vec![ArrowList { from: 1, to: 0, times: alloc::vec![0.5] }],
        );
        assert_eq!(slab_counts(&tl), (1, 1));
    }

    #[test]
    fn memory_guard() {
        let g = MultiGraph::complete(100);
        let err = graphical_window_with_limit(&g, 1.0, 10.0, 1e4, &mut ChaCha8Rng::seed_from_u64(2)).unwrap_err();
        assert!(matches!(err, Error::WindowTooLarge { .. }));
    }

    #[test]
    fn mark_and_arrow_rates() {
        let g = MultiGraph::from_edges(2, [(0, 1, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (lambda, t) = (0.7, 2.5);
        let mut marks = Vec::new();
        let mut arrows = Vec::new();
        for _ in 0..10_000 {
            let tl = graphical_window(&g, lambda, t, &mut rng).unwrap();
            assert_eq!(tl.arrows.len(), 2);
            assert!(tl.events.windows(2).all(|w| w[0].0 <= w[1].0));
            assert!(tl.events.iter().all(|e| e.0 >= 0.0 && e.0 <= t));
            marks.push(tl.marks[0].len() as f64);
            arrows.push(tl.arrows[1].times.len() as f64);
        }
        let (m, a) = (Summary::of(&marks), Summary::of(&arrows));
        assert!((m.mean - t).abs() < 3.0 * m.std_error);
        assert!((a.mean - 2.0 * lambda * t).abs() < 3.0 * a.std_error);
    }

    #[test]
    fn reproducible_from_seed() {
        let g = MultiGraph::cycle(6);
        let a = graphical_window(&g, 0.9, 3.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = graphical_window(&g, 0.9, 3.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
