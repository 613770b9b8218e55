use rand::Rng;

use super::sample_qi_degree;
use crate::{Constants, Error, Result, Tree};

/// Ball of radius `depth` in GW(q_0, q_1, q_{i-1}): the root has a
/// q_0-distributed number of children, its children q_1 - 1, and every
/// deeper node q_{i-1} - 1. Offspring counts above `degree_cap` are cut
/// and flagged.
pub fn sample_gw_ball<R: Rng + ?Sized>(
    i: usize,
    depth: usize,
    constants: &Constants,
    degree_cap: u64,
    rng: &mut R,
) -> Result<Tree> {
    if i < 2 {
        return Err(Error::out_of_range("i", i as f64, "i >= 2"));
    }
    if depth > i {
        return Err(Error::DepthExceedsIndex { depth, index: i });
    }
    let mut tree = Tree::with_root(depth);
    let mut v = 0;
    while v < tree.len() {
        let d = tree.node(v).depth as usize;
        if d < depth {
            let offspring = match d {
                0 => sample_qi_degree(0, constants, rng),
                1 => sample_qi_degree(1, constants, rng) - 1,
                _ => sample_qi_degree(i - 1, constants, rng) - 1,
            };
            let truncated = offspring > degree_cap;
            tree.push_children(v, offspring.min(degree_cap) as usize, truncated);
        }
        v += 1;
    }
    Ok(tree)
}
