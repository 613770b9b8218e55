use alloc::vec::Vec;

use rand::Rng;

use super::degree_law::poisson_scale;
use super::{open01, sample_gamma, sample_poisson_capped};
use crate::math::powf;
use crate::{Constants, Error, Result, Tree};

pub const DEFAULT_DEGREE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeType {
    Root,
    L,
    R,
}

impl NodeType {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeType::Root => "Root",
            NodeType::L => "L",
            NodeType::R => "R",
        }
    }
}

impl core::str::FromStr for NodeType {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "Root" => Ok(NodeType::Root),
            "L" => Ok(NodeType::L),
            "R" => Ok(NodeType::R),
            _ => Err(()),
        }
    }
}

/// Per-node marks of the Pólya-point tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PPNode {
    pub x: f64,
    pub node_type: NodeType,
    pub gamma: f64,
    pub m_v: u32,
}

/// A depth-truncated Pólya-point tree: the shape lives in `tree`, and
/// `marks[i]` belongs to node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaPointTree {
    pub tree: Tree,
    pub marks: Vec<PPNode>,
}

impl PolyaPointTree {
    /// Reassembles a tree from parts, e.g. after parsing.
    pub fn from_parts(tree: Tree, marks: Vec<PPNode>) -> Result<Self> {
        if tree.len() != marks.len() {
            return Err(Error::TooFewPoints { got: marks.len(), required: tree.len() });
        }
        Ok(PolyaPointTree { tree, marks })
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn root_degree(&self) -> u64 {
        self.tree.degree(0)
    }

    /// Number of nodes whose R-child count hit the degree cap.
    pub fn truncated_nodes(&self) -> usize {
        self.tree.nodes().iter().filter(|n| n.truncated).count()
    }
}

fn new_mark<R: Rng + ?Sized>(x: f64, node_type: NodeType, c: &Constants, rng: &mut R) -> PPNode {
    let (shape, m_v) = match node_type {
        NodeType::Root => (c.urn_shape(), c.m),
        NodeType::L => (c.urn_shape() + 1.0, c.m),
        NodeType::R => (c.urn_shape(), c.m - 1),
    };
    PPNode { x, node_type, gamma: sample_gamma(shape, rng), m_v }
}

pub fn sample_ppt<R: Rng + ?Sized>(
    constants: &Constants,
    depth: usize,
    degree_cap: u64,
    rng: &mut R,
) -> Result<PolyaPointTree> {
    let m = constants.m as u64;
    if degree_cap < m + 1 {
        return Err(Error::out_of_range("degree_cap", degree_cap as f64, "degree_cap >= m + 1"));
    }
    let psi = constants.psi;
    let mut tree = Tree::with_root(depth);
    let root_x = powf(open01(rng), constants.chi);
    let mut marks = alloc::vec![new_mark(root_x, NodeType::Root, constants, rng)];
    let mut positions = Vec::new();

    let mut v = 0;
    while v < tree.len() {
        if (tree.node(v).depth as usize) < depth {
            let PPNode { x, gamma, m_v, .. } = marks[v];
            let (r_count, truncated) = sample_poisson_capped(gamma * poisson_scale(x, psi), degree_cap, rng);

            positions.clear();
            positions.extend((0..m_v).map(|_| x * open01(rng)));
            positions.sort_by(f64::total_cmp);
            let l_count = positions.len();
            let x_psi = powf(x, psi);
            let inv_psi = 1.0 / psi;
            let r_start = positions.len();
            positions.extend((0..r_count).map(|_| {
                let u: f64 = rng.random();
                powf(x_psi + u * (1.0 - x_psi), inv_psi).min(1.0)
            }));
            positions[r_start..].sort_by(f64::total_cmp);

            tree.push_children(v, positions.len(), truncated);
            for (k, &y) in positions.iter().enumerate() {
                let kind = if k < l_count { NodeType::L } else { NodeType::R };
                marks.push(new_mark(y, kind, constants, rng));
            }
        }
        v += 1;
    }
    Ok(PolyaPointTree { tree, marks })
}
