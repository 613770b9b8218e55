//! Rooted trees stored as a breadth-first arena.
//!
//! Children of a node occupy a contiguous index range, and node 0 is the
//! root. The Pólya-point sampler and the Galton–Watson sampler both produce
//! this shape; the contact-process escape trial consumes it.

use alloc::vec::Vec;

use crate::MultiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<u32>,
    pub depth: u32,
    pub first_child: u32,
    pub child_count: u32,
    /// Set when this node's offspring count was cut at the degree cap.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    /// Depth the tree was sampled to; nodes at this depth have no
    /// children recorded even if the infinite tree has them.
    sampled_depth: usize,
}

impl Tree {
    pub(crate) fn with_root(sampled_depth: usize) -> Self {
        Tree {
            nodes: alloc::vec![TreeNode {
                parent: None,
                depth: 0,
                first_child: 0,
                child_count: 0,
                truncated: false,
            }],
            sampled_depth,
        }
    }

    /// Appends `count` children of `parent`. Must be called in breadth-first
    /// order so that children stay contiguous.
    pub(crate) fn push_children(&mut self, parent: usize, count: usize, truncated: bool) -> core::ops::Range<usize> {
        let first = self.nodes.len();
        let depth = self.nodes[parent].depth + 1;
        {
            let p = &mut self.nodes[parent];
            p.first_child = if count > 0 { first as u32 } else { 0 };
            p.child_count = count as u32;
            p.truncated = truncated;
        }
        self.nodes.extend((0..count).map(|_| TreeNode {
            parent: Some(parent as u32),
            depth,
            first_child: 0,
            child_count: 0,
            truncated: false,
        }));
        first..first + count
    }

    /// Rebuilds a tree from per-node `(child_count, truncated)` in
    /// breadth-first order, e.g. when reading a tree back from a file.
    pub fn from_child_counts(sampled_depth: usize, counts: &[(u32, bool)]) -> crate::Result<Self> {
        let mut tree = Tree::with_root(sampled_depth);
        for (v, &(count, truncated)) in counts.iter().enumerate() {
            if v >= tree.len() {
                return Err(crate::Error::TooFewPoints { got: tree.len(), required: counts.len() });
            }
            tree.push_children(v, count as usize, truncated);
        }
        if tree.len() != counts.len() {
            return Err(crate::Error::TooFewPoints { got: counts.len(), required: tree.len() });
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sampled_depth(&self) -> usize {
        self.sampled_depth
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn children(&self, i: usize) -> core::ops::Range<usize> {
        let n = &self.nodes[i];
        n.first_child as usize..(n.first_child + n.child_count) as usize
    }

    /// Degree in the tree: children plus the parent edge.
    pub fn degree(&self, i: usize) -> u64 {
        let n = &self.nodes[i];
        n.child_count as u64 + u64::from(n.parent.is_some())
    }

    /// Number of nodes within distance `radius` of the root.
    pub fn ball_size(&self, radius: usize) -> usize {
        // breadth-first order means depths are non-decreasing
        self.nodes.partition_point(|n| (n.depth as usize) <= radius)
    }

    /// Whether any node above `depth` had its offspring truncated.
    pub fn truncated_within(&self, depth: usize) -> bool {
        self.nodes[..self.ball_size(depth)]
            .iter()
            .any(|n| n.truncated && (n.depth as usize) < depth)
    }

    /// Child-index path from the root, e.g. `[]` for the root and `[0, 2]`
    /// for the third child of the first child.
    pub fn path(&self, mut i: usize) -> Vec<u32> {
        let mut path = Vec::new();
        while let Some(p) = self.nodes[i].parent {
            path.push((i - self.nodes[p as usize].first_child as usize) as u32);
            i = p as usize;
        }
        path.reverse();
        path
    }

    /// The subtree of nodes with depth `<= radius` as a multigraph with the
    /// same vertex indices.
    pub fn to_graph(&self, radius: usize) -> MultiGraph {
        let size = self.ball_size(radius);
        let pairs: Vec<(u32, u32)> = (1..size)
            .map(|i| (self.nodes[i].parent.unwrap(), i as u32))
            .collect();
        MultiGraph::from_pairs(size, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Tree {
        // root with 2 children; first child has 3 children
        let mut t = Tree::with_root(2);
        t.push_children(0, 2, false);
        t.push_children(1, 3, false);
        t.push_children(2, 0, false);
        t
    }

    #[test]
    fn structure() {
        let t = small();
        assert_eq!(t.len(), 6);
        assert_eq!(t.degree(0), 2);
        assert_eq!(t.degree(1), 4);
        assert_eq!(t.ball_size(0), 1);
        assert_eq!(t.ball_size(1), 3);
        assert_eq!(t.ball_size(2), 6);
        assert_eq!(t.path(4), alloc::vec![0, 1]);
        assert_eq!(t.path(0), Vec::<u32>::new());
    }

    #[test]
    fn rebuild_from_counts() {
        let t = small();
        let counts: Vec<(u32, bool)> = t.nodes().iter().map(|n| (n.child_count, n.truncated)).collect();
        assert_eq!(Tree::from_child_counts(2, &counts).unwrap(), t);
        assert!(Tree::from_child_counts(2, &counts[..4]).is_err());
        assert!(Tree::from_child_counts(2, &[(1, false)]).is_err());
    }

    #[test]
    fn graph_view_preserves_degrees() {
        let t = small();
        let g = t.to_graph(2);
        for i in 0..t.len() {
            assert_eq!(g.degree(i), t.degree(i));
        }
        assert_eq!(t.to_graph(1).vertex_count(), 3);
    }
}
