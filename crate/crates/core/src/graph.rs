//! Immutable undirected multigraph with explicit edge multiplicities.

use alloc::vec::Vec;

use crate::{Error, Result};

/// An undirected edge `u < v` carrying `multiplicity` parallel copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub multiplicity: u32,
}

/// Multigraph on vertices `0..n` in compressed adjacency form.
///
/// Vertex `i` here is `v_{i+1}` in 1-based notation. Degrees count
/// multiplicity; distances ignore it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(u32, u32)>,
    degrees: Vec<u64>,
}

impl MultiGraph {
    /// Builds a graph from `(u, v, multiplicity)` triples in any order and
    /// orientation. Repeated pairs are merged; zero multiplicities dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut list = Vec::new();
        for (a, b, mult) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { vertex: a });
            }
            if mult == 0 {
                continue;
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge {
                u: u as u32,
                v: v as u32,
                multiplicity: mult,
            });
        }
        list.sort_unstable();
        let mut merged: Vec<Edge> = Vec::with_capacity(list.len());
        for e in list {
            match merged.last_mut() {
                Some(last) if last.u == e.u && last.v == e.v => last.multiplicity += e.multiplicity,
                _ => merged.push(e),
            }
        }
        Ok(Self::from_merged(n, merged))
    }

    /// Builds from single (multiplicity one) endpoint pairs, which is how
    /// both generators emit edges.
    pub(crate) fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut list: Vec<(u32, u32)> = pairs
            .iter()
            .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        list.sort_unstable();
        let mut merged: Vec<Edge> = Vec::new();
        for (u, v) in list {
            debug_assert!(u != v);
            match merged.last_mut() {
                Some(last) if last.u == u && last.v == v => last.multiplicity += 1,
                _ => merged.push(Edge { u, v, multiplicity: 1 }),
            }
        }
        Self::from_merged(n, merged)
    }

    fn from_merged(n: usize, edges: Vec<Edge>) -> Self {
        let mut counts = alloc::vec![0usize; n + 1];
        let mut degrees = alloc::vec![0u64; n];
        for e in &edges {
            counts[e.u as usize + 1] += 1;
            counts[e.v as usize + 1] += 1;
            degrees[e.u as usize] += e.multiplicity as u64;
            degrees[e.v as usize] += e.multiplicity as u64;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut adjacency = alloc::vec![(0u32, 0u32); offsets[n]];
        for e in &edges {
            adjacency[fill[e.u as usize]] = (e.v, e.multiplicity);
            fill[e.u as usize] += 1;
            adjacency[fill[e.v as usize]] = (e.u, e.multiplicity);
            fill[e.v as usize] += 1;
        }
        MultiGraph {
            n,
            edges,
            offsets,
            adjacency,
            degrees,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Distinct adjacent pairs, sorted lexicographically with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of edges counting multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.multiplicity as u64).sum()
    }

    /// `(neighbor, multiplicity)` pairs of `v`.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Multiplicity of the edge between `u` and `v`, zero if not adjacent.
    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let (a, b) = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(a, b)))
            .map(|i| self.edges[i].multiplicity)
            .unwrap_or(0)
    }

    /// `hist[d]` = number of vertices of degree `d`.
    pub fn degree_histogram(&self) -> Vec<u64> {
        let mut hist = alloc::vec![0u64; self.max_degree() as usize + 1];
        for &d in &self.degrees {
            hist[d as usize] += 1;
        }
        hist
    }

    /// Star with the center at vertex 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let pairs: Vec<(u32, u32)> = (1..=leaves as u32).map(|l| (0, l)).collect();
        Self::from_pairs(leaves + 1, &pairs)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let pairs: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        Self::from_pairs(n, &pairs)
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                pairs.push((u, v));
            }
        }
        Self::from_pairs(n, &pairs)
    }

    /// Cycle on `n >= 3` vertices; every vertex has degree 2.
    pub fn cycle(n: usize) -> Self {
        let mut pairs: Vec<(u32, u32)> = (1..n as u32).map(|v| (v - 1, v)).collect();
        pairs.push((0, n as u32 - 1));
        Self::from_pairs(n, &pairs)
    }

    /// Two stars with `leaves` leaves each whose centers are joined by a
    /// path of `distance` edges. The first center is vertex 0, the second
    /// is returned alongside the graph.
    pub fn double_star(leaves: usize, distance: usize) -> (Self, usize) {
        assert!(distance >= 1);
        let mut pairs = Vec::new();
        // centers and path: 0, 1, ..., distance
        for v in 1..=distance as u32 {
            pairs.push((v - 1, v));
        }
        let second = distance as u32;
        let mut next = distance as u32 + 1;
        for center in [0, second] {
            for _ in 0..leaves {
                pairs.push((center, next));
                next += 1;
            }
        }
        (Self::from_pairs(next as usize, &pairs), second as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_repeated_pairs() {
        let g = MultiGraph::from_edges(3, [(0, 1, 1), (1, 0, 2), (1, 2, 1)]).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.multiplicity(0, 1), 3);
        assert_eq!(g.degree(1), 4);
        assert_eq!(g.total_multiplicity(), 4);
        assert_eq!(g.neighbors(1).len(), 2);
    }

    #[test]
    fn rejects_self_loops_and_bad_vertices() {
        assert_eq!(
            MultiGraph::from_edges(2, [(1, 1, 1)]),
            Err(Error::SelfLoop { vertex: 1 })
        );
        assert!(matches!(
            MultiGraph::from_edges(2, [(0, 2, 1)]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn shapes() {
        assert_eq!(MultiGraph::star(5).degree(0), 5);
        assert_eq!(MultiGraph::path(6).total_multiplicity(), 5);
        assert_eq!(MultiGraph::complete(4).total_multiplicity(), 6);
        assert!(MultiGraph::cycle(5).degrees().iter().all(|&d| d == 2));
        let (g, w) = MultiGraph::double_star(3, 2);
        assert_eq!(w, 2);
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(w), 4);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn histogram_sums() {
        let g = MultiGraph::star(4);
        let h = g.degree_histogram();
        assert_eq!(h.iter().sum::<u64>(), 5);
        assert_eq!(h[1], 4);
        assert_eq!(h[4], 1);
    }
}
