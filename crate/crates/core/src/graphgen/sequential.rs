use alloc::vec::Vec;

use rand::Rng;

use super::Constants;
use crate::{Error, MultiGraph, Result};

/// Direct sequential model.
///
/// `G_2` is `m` parallel edges `v_1 - v_2`. Vertex `v_t` then picks endpoints
/// `w_{t,1..m}` in turn: the `i`-th is uniform over `v_1..v_{t-1}` with
/// probability `alpha_t^(i)`, and otherwise degree-proportional, where the
/// degrees include endpoints already chosen by `v_t` (normaliser
/// `Z^(i) = 2m(t-2) + i - 1`). Degree-proportional draws pick a uniform
/// entry of the endpoint-occurrence list.
pub fn build_sequential_graph<R: Rng + ?Sized>(n: usize, constants: &Constants, rng: &mut R) -> Result<MultiGraph> {
    if n < 2 {
        return Err(Error::out_of_range("n", n as f64, "n >= 2"));
    }
    let m = constants.m as usize;
    let alpha = constants.alpha;
    let mut occurrences: Vec<u32> = Vec::with_capacity(2 * m * (n - 1));
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(m * (n - 1));
    for _ in 0..m {
        occurrences.extend([0, 1]);
        pairs.push((0, 1));
    }
    let mut chosen = Vec::with_capacity(m);
    for t in 3..=n {
        let newcomer = (t - 1) as u32;
        chosen.clear();
        for i in 1..=m {
            debug_assert_eq!(occurrences.len(), 2 * m * (t - 2) + i - 1);
            let w = if rng.random::<f64>() < uniform_probability(alpha, m, t, i) {
                rng.random_range(0..t - 1) as u32
            } else {
                occurrences[rng.random_range(0..occurrences.len())]
            };
            // deg^(i+1) already counts this endpoint
            occurrences.push(w);
            chosen.push(w);
        }
        for &w in &chosen {
            occurrences.push(newcomer);
            pairs.push((w, newcomer));
        }
    }
    Ok(MultiGraph::from_pairs(n, &pairs))
}

/// `alpha_t^(i)`: `alpha` for the first endpoint, and
/// `alpha * 2m(t-1) / (2m(t-2) + 2m alpha + (1 - alpha)(i - 1))` after it.
fn uniform_probability(alpha: f64, m: usize, t: usize, i: usize) -> f64 {
    if i == 1 {
        return alpha;
    }
    let m = m as f64;
    let t = t as f64;
    alpha * 2.0 * m * (t - 1.0) / (2.0 * m * (t - 2.0) + 2.0 * m * alpha + (1.0 - alpha) * (i as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn both_to_first(g: &MultiGraph) -> bool {
        g.multiplicity(0, 2) == 2
    }

    #[test]
    fn two_vertices() {
        let c = Constants::new(4, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = build_sequential_graph(2, &c, &mut rng).unwrap();
        assert_eq!(g.multiplicity(0, 1), 4);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn counts_and_degrees() {
        let c = Constants::new(3, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = build_sequential_graph(1000, &c, &mut rng).unwrap();
        assert_eq!(g.total_multiplicity(), 3 * 999);
        assert_eq!(g.degrees().iter().sum::<u64>(), 6 * 999);
    }

    #[test]
    fn uniform_attachment_limit() {
        // alpha = 1: each endpoint uniform over {v1, v2}, both on v1 w.p. 1/4
        let c = Constants::uniform_attachment(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let runs = 100_000u64;
        let hits = (0..runs)
            .filter(|_| both_to_first(&build_sequential_graph(3, &c, &mut rng).unwrap()))
            .count() as u64;
        let p = 0.25;
        let se = libm::sqrt(p * (1.0 - p) / runs as f64);
        assert!((hits as f64 / runs as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn pure_preferential_third_vertex() {
        // alpha = 0, n = 3: first endpoint v1 w.p. 2/4; the second sees the
        // updated degrees (3, 2) out of 5. Enumerating the two draws:
        // P(both v1) = 3/10, P(both v2) = 3/10, P(split) = 4/10.
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let runs = 100_000u64;
        let mut counts = [0u64; 3];
        for _ in 0..runs {
            let g = build_sequential_graph(3, &c, &mut rng).unwrap();
            counts[g.multiplicity(0, 2) as usize] += 1;
        }
        // multiplicity(v1, v3) = 0, 1, 2
        let expected = [0.3, 0.4, 0.3];
        for k in 0..3 {
            let p = expected[k];
            let se = libm::sqrt(p * (1.0 - p) / runs as f64);
            let got = counts[k] as f64 / runs as f64;
            assert!((got - p).abs() < 3.0 * se, "k={k}: {got} vs {p}");
        }
    }

    #[test]
    fn corrected_probability_tends_to_alpha() {
        let a = uniform_probability(0.3, 2, 1_000_000, 2);
        assert!((a - 0.3).abs() < 1e-5);
        assert_eq!(uniform_probability(0.3, 2, 5, 1), 0.3);
        assert_eq!(uniform_probability(0.0, 2, 5, 2), 0.0);
    }
}
