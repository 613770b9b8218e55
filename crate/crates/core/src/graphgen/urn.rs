use alloc::vec::Vec;

use rand::Rng;

use super::{Constants, PolyaWeights};
use crate::math::ln_1p;
use crate::{Error, MultiGraph, Result};

/// Urn-representation graph: for each `k = 2..n` and each of the `m` slots,
/// draw `U ~ U[0, S_{k-1})`, find the interval `I_j` containing it and add
/// one edge `v_j - v_k`.
pub fn build_polya_graph<R: Rng + ?Sized>(weights: &PolyaWeights, constants: &Constants, rng: &mut R) -> MultiGraph {
    let n = weights.n();
    let m = constants.m as usize;
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(m * (n - 1));
    for k in 2..=n {
        let upper = weights.s(k - 1);
        for _ in 0..m {
            let u = rng.random::<f64>() * upper;
            let j = weights.locate(u, k);
            pairs.push(((j - 1) as u32, (k - 1) as u32));
        }
    }
    MultiGraph::from_pairs(n, &pairs)
}

/// Conditional probability that `v_i ~ v_j` given the weights, with the
/// bounds `psi_i S_i^(j-1) <= p <= m psi_i S_i^(j-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProbability {
    pub probability: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `P(v_i ~ v_j | weights) = 1 - (1 - phi_i / S_{j-1})^m` for
/// `1 <= i < j <= n` (1-based).
pub fn edge_probability(weights: &PolyaWeights, i: usize, j: usize, m: u32) -> Result<EdgeProbability> {
    let n = weights.n();
    if i < 1 || i >= j || j > n {
        return Err(Error::InvalidPair { i, j, n });
    }
    // phi_i / S_{j-1} = psi_i S_i^(j-1)
    let q = weights.psi(i) * weights.tail_product(i, j - 1);
    let probability = if q >= 1.0 {
        1.0
    } else {
        -libm::expm1(m as f64 * ln_1p(-q))
    };
    Ok(EdgeProbability {
        probability,
        lower: q,
        upper: m as f64 * q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::sample_weights;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn second_vertex_gets_m_parallel_edges() {
        let c = Constants::new(3, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let w = sample_weights(2, &c, &mut rng).unwrap();
            let g = build_polya_graph(&w, &c, &mut rng);
            assert_eq!(g.multiplicity(0, 1), 3);
        }
    }

    #[test]
    fn edge_and_degree_identities() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2, 3, 17, 500] {
            let w = sample_weights(n, &c, &mut rng).unwrap();
            let g = build_polya_graph(&w, &c, &mut rng);
            assert_eq!(g.total_multiplicity(), 2 * (n as u64 - 1));
            assert_eq!(g.degrees().iter().sum::<u64>(), 4 * (n as u64 - 1));
            assert!(g.edges().iter().all(|e| e.u < e.v));
        }
    }

    #[test]
    fn first_pair_is_certain() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = sample_weights(10, &c, &mut rng).unwrap();
        let p = edge_probability(&w, 1, 2, 2).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-15);
        assert!(edge_probability(&w, 2, 2, 2).is_err());
        assert!(edge_probability(&w, 3, 2, 2).is_err());
        assert!(edge_probability(&w, 0, 2, 2).is_err());
        assert!(edge_probability(&w, 1, 11, 2).is_err());
    }

    #[test]
    fn probability_within_bounds() {
        let c = Constants::new(3, 0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = sample_weights(300, &c, &mut rng).unwrap();
        for i in 1..300 {
            for j in (i + 1..=300).step_by(7) {
                let p = edge_probability(&w, i, j, 3).unwrap();
                assert!(p.lower <= p.probability * (1.0 + 1e-12));
                assert!(p.probability <= p.upper * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn adjacency_frequency_matches_formula() {
        // one fixed weight realization, many independent edge draws
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let w = sample_weights(100, &c, &mut rng).unwrap();
        let p = edge_probability(&w, 5, 50, 2).unwrap().probability;
        let runs = 100_000u64;
        let mut hits = 0u64;
        for _ in 0..runs {
            let g = build_polya_graph(&w, &c, &mut rng);
            if g.multiplicity(4, 49) > 0 {
                hits += 1;
            }
        }
        let s = crate::stats::Summary::of_proportion(hits, runs);
        let se = libm::sqrt(p * (1.0 - p) / runs as f64);
        assert!((s.mean - p).abs() < 3.0 * se, "{} vs {p}", s.mean);
    }
}
