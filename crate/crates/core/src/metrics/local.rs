use alloc::vec::Vec;

use rand::Rng;

use super::distance::ball_extract;
use crate::stats::{chi_square_homogeneity, ks_statistic, ChiSquare};
use crate::{Error, MultiGraph, Result, Tree};

/// Minimum pooled count per bin in the root-degree chi-square.
const MIN_POOLED: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallStats {
    pub root_degree: u64,
    pub ball_size: usize,
}

pub fn ball_stats(graph: &MultiGraph, v: usize, radius: usize) -> Result<BallStats> {
    let ball = ball_extract(graph, v, radius)?;
    Ok(BallStats { root_degree: graph.degree(v), ball_size: ball.vertices.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalLimitReport {
    pub radius: usize,
    pub graph_samples: usize,
    pub tree_samples: usize,
    /// Homogeneity test of root degrees, graph roots against tree roots.
    pub degree_chi_square: ChiSquare,
    pub degree_ks: f64,
    pub ball_size_ks: f64,
    /// Trees whose offspring were cut inside the compared radius.
    pub truncated_trees: usize,
    pub graph_stats: Vec<BallStats>,
    pub tree_stats: Vec<BallStats>,
}

/// Compares `B(u, radius)` for `roots_per_graph` uniform roots `u` in each
/// graph with the same statistics of the tree samples.
pub fn local_limit_compare<R: Rng + ?Sized>(
    graphs: &[MultiGraph],
    roots_per_graph: usize,
    trees: &[Tree],
    radius: usize,
    rng: &mut R,
) -> Result<LocalLimitReport> {
    let mut graph_stats = Vec::with_capacity(graphs.len() * roots_per_graph);
    for g in graphs {
        if g.vertex_count() == 0 {
            return Err(Error::EmptyInit);
        }
        for _ in 0..roots_per_graph {
            let v = rng.random_range(0..g.vertex_count());
            graph_stats.push(ball_stats(g, v, radius)?);
        }
    }
    let mut tree_stats = Vec::with_capacity(trees.len());
    let mut truncated_trees = 0;
    for t in trees {
        if t.sampled_depth() < radius {
            return Err(Error::TreeTooShallow { depth: t.sampled_depth(), required: radius });
        }
        truncated_trees += t.truncated_within(radius) as usize;
        tree_stats.push(BallStats { root_degree: t.degree(0), ball_size: t.ball_size(radius) });
    }
    if graph_stats.is_empty() || tree_stats.is_empty() {
        return Err(Error::TooFewPoints { got: graph_stats.len().min(tree_stats.len()), required: 1 });
    }
    let degrees = |s: &[BallStats]| s.iter().map(|b| b.root_degree).collect::<Vec<u64>>();
    let as_f64 = |v: Vec<u64>| v.into_iter().map(|x| x as f64).collect::<Vec<f64>>();
    let sizes = |s: &[BallStats]| s.iter().map(|b| b.ball_size as f64).collect::<Vec<f64>>();
    let (gd, td) = (degrees(&graph_stats), degrees(&tree_stats));
    Ok(LocalLimitReport {
        radius,
        graph_samples: graph_stats.len(),
        tree_samples: tree_stats.len(),
        degree_chi_square: chi_square_homogeneity(&gd, &td, MIN_POOLED),
        degree_ks: ks_statistic(&as_f64(gd), &as_f64(td)),
        ball_size_ks: ks_statistic(&sizes(&graph_stats), &sizes(&tree_stats)),
        truncated_trees,
        graph_stats,
        tree_stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{build_polya_graph, sample_weights};
    use crate::locallimit::sample_ppt;
    use crate::Constants;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn radius_zero_is_trivial() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = sample_weights(500, &c, &mut rng).unwrap();
        let g = build_polya_graph(&w, &c, &mut rng);
        let trees: Vec<Tree> = (0..200).map(|_| sample_ppt(&c, 0, 1000, &mut rng).unwrap().tree).collect();
        let r = local_limit_compare(&[g], 200, &trees, 0, &mut rng).unwrap();
        assert_eq!(r.ball_size_ks, 0.0);
        assert!(r.graph_stats.iter().chain(&r.tree_stats).all(|s| s.ball_size == 1));
    }

    #[test]
    fn root_degrees_close_at_moderate_n() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = sample_weights(20_000, &c, &mut rng).unwrap();
        let g = build_polya_graph(&w, &c, &mut rng);
        let trees: Vec<Tree> = (0..3_000).map(|_| sample_ppt(&c, 1, 100_000, &mut rng).unwrap().tree).collect();
        let r = local_limit_compare(&[g], 3_000, &trees, 1, &mut rng).unwrap();
        // 0.1% two-sample KS critical value (ties make it conservative)
        assert!(r.degree_ks < 1.95 * libm::sqrt(2.0 / 3_000.0), "{}", r.degree_ks);
        assert!(r.degree_chi_square.dof >= 5);
    }

    #[test]
    fn shallow_tree_rejected() {
        let g = MultiGraph::path(4);
        let t = Tree::with_root(0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(local_limit_compare(&[g], 4, &[t], 1, &mut rng), Err(Error::TreeTooShallow { .. })));
    }
}
