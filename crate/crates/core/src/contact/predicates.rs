use super::state::ContactState;
use crate::MultiGraph;

const E: f64 = core::f64::consts::E;

/// Threshold on the infected-neighbour proportion for a lit vertex.
pub fn lit_threshold(lambda: f64) -> f64 {
    lambda / (16.0 * E)
}

/// Threshold for a hot vertex, twice the lit threshold.
pub fn hot_threshold(lambda: f64) -> f64 {
    lambda / (8.0 * E)
}

fn infected_fraction_at_least(state: &ContactState, graph: &MultiGraph, v: usize, threshold: f64) -> bool {
    let deg = graph.degree(v);
    // isolated vertices are never lit or hot
    deg > 0 && state.pressure(v) as f64 >= threshold * deg as f64
}

pub fn is_lit(state: &ContactState, graph: &MultiGraph, v: usize, lambda: f64) -> bool {
    infected_fraction_at_least(state, graph, v, lit_threshold(lambda))
}

pub fn is_hot(state: &ContactState, graph: &MultiGraph, v: usize, lambda: f64) -> bool {
    infected_fraction_at_least(state, graph, v, hot_threshold(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::Init;

    fn star_with_infected_leaves(leaves: usize, infected: usize) -> (MultiGraph, ContactState) {
        let g = MultiGraph::star(leaves);
        let s = ContactState::new(&g, &Init::Set((1..=infected).collect())).unwrap();
        (g, s)
    }

    #[test]
    fn thresholds() {
        assert!((lit_threshold(0.5) - 0.011_497).abs() < 1e-6);
        assert_eq!(hot_threshold(0.5), 2.0 * lit_threshold(0.5));
    }

    #[test]
    fn all_or_none_infected() {
        let (g, s) = star_with_infected_leaves(10, 10);
        assert!(is_lit(&s, &g, 0, 16.0 * E));
        assert!(is_hot(&s, &g, 0, 8.0 * E));
        let (g, s) = star_with_infected_leaves(10, 1);
        let s2 = ContactState::new(&g, &Init::Single(5)).unwrap();
        assert!(!is_lit(&s2, &g, 1, 0.01));
        assert!(!is_hot(&s, &g, 2, 0.01));
    }

    #[test]
    fn degree_hundred_three_infected() {
        let (g, s) = star_with_infected_leaves(100, 3);
        assert!(is_lit(&s, &g, 0, 0.5));
        assert!(is_hot(&s, &g, 0, 0.5));
        // 0.03 < 1.0/(8e) = 0.04599 but >= 1.0/(16e) = 0.02299
        assert!(is_lit(&s, &g, 0, 1.0));
        assert!(!is_hot(&s, &g, 0, 1.0));
        // 0.03 < 2.0/(16e)
        assert!(!is_lit(&s, &g, 0, 2.0));
    }

    #[test]
    fn isolated_vertex_never_lit() {
        let g = MultiGraph::from_edges(2, core::iter::empty()).unwrap();
        let s = ContactState::new(&g, &Init::Full).unwrap();
        assert!(!is_lit(&s, &g, 0, 0.0));
        assert!(!is_hot(&s, &g, 1, 0.0));
    }
}
