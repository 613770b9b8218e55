use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng;

use crate::stats::{median, Summary};
use crate::{Error, MultiGraph, Result};

pub const UNREACHED: u32 = u32::MAX;

/// Above this many vertices the diameter is estimated by double sweeps.
pub const EXACT_DIAMETER_LIMIT: usize = 10_000;

/// Hop distances from `source`, ignoring multiplicities.
pub fn bfs_distances(graph: &MultiGraph, source: usize) -> Vec<u32> {
    let mut dist = alloc::vec![UNREACHED; graph.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        for &(w, _) in graph.neighbors(v) {
            let w = w as usize;
            if dist[w] == UNREACHED {
                dist[w] = d;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn farthest(graph: &MultiGraph, source: usize) -> Result<(usize, u32)> {
    let dist = bfs_distances(graph, source);
    let mut best = (source, 0);
    for (v, &d) in dist.iter().enumerate() {
        if d == UNREACHED {
            return Err(Error::Disconnected { from: source, to: v });
        }
        if d > best.1 {
            best = (v, d);
        }
    }
    Ok(best)
}

pub fn bfs_eccentricity(graph: &MultiGraph, v: usize) -> Result<u32> {
    let n = graph.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(farthest(graph, v)?.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiameterMethod {
    Exact,
    /// Lower bound from repeated double sweeps.
    DoubleSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiameterEstimate {
    pub value: u32,
    pub method: DiameterMethod,
}

/// Exact diameter below [`EXACT_DIAMETER_LIMIT`] vertices, otherwise the
/// best of `sweeps` double sweeps started from the highest-degree vertex
/// and from evenly spaced vertex indices.
pub fn diameter_estimate(graph: &MultiGraph, sweeps: usize) -> Result<DiameterEstimate> {
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(DiameterEstimate { value: 0, method: DiameterMethod::Exact });
    }
    if n < EXACT_DIAMETER_LIMIT {
        let mut best = 0;
        for v in 0..n {
            best = best.max(farthest(graph, v)?.1);
        }
        return Ok(DiameterEstimate { value: best, method: DiameterMethod::Exact });
    }
    let hub = (0..n).max_by_key(|&v| (graph.degree(v), core::cmp::Reverse(v))).unwrap();
    let mut best = 0;
    for s in 0..sweeps.max(1) {
        let start = if s == 0 { hub } else { s * n / sweeps };
        let (far, d1) = farthest(graph, start)?;
        let (_, d2) = farthest(graph, far)?;
        best = best.max(d1).max(d2);
    }
    Ok(DiameterEstimate { value: best, method: DiameterMethod::DoubleSweep })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSummary {
    pub pairs: usize,
    pub mean: f64,
    pub median: f64,
    pub min: u32,
    pub max: u32,
    pub distances: Vec<u32>,
}

/// Distances between `pairs` independently sampled pairs of distinct
/// vertices.
pub fn typical_distance_sample<R: Rng + ?Sized>(graph: &MultiGraph, pairs: usize, rng: &mut R) -> Result<DistanceSummary> {
    let n = graph.vertex_count();
    if pairs == 0 || n < 2 {
        return Err(Error::TooFewPoints { got: pairs.min(n), required: 2 });
    }
    let mut distances = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let d = bfs_distances(graph, u)[v];
        if d == UNREACHED {
            return Err(Error::Disconnected { from: u, to: v });
        }
        distances.push(d);
    }
    let as_f64: Vec<f64> = distances.iter().map(|&d| d as f64).collect();
    Ok(DistanceSummary {
        pairs,
        mean: Summary::of(&as_f64).mean,
        median: median(&as_f64),
        min: *distances.iter().min().unwrap(),
        max: *distances.iter().max().unwrap(),
        distances,
    })
}

/// Induced subgraph on the vertices within distance `radius` of a centre.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    /// Original vertex ids in BFS order; the centre is first.
    pub vertices: Vec<usize>,
    pub distances: Vec<u32>,
    /// Relabelled so that vertex `i` is `vertices[i]`.
    pub graph: MultiGraph,
}

pub fn ball_extract(graph: &MultiGraph, center: usize, radius: usize) -> Result<Ball> {
    let n = graph.vertex_count();
    if center >= n {
        return Err(Error::VertexOutOfRange { vertex: center, n });
    }
    let mut label = alloc::collections::BTreeMap::new();
    let mut vertices = alloc::vec![center];
    let mut distances = alloc::vec![0u32];
    label.insert(center, 0usize);
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head];
        let d = distances[head];
        head += 1;
        if d as usize == radius {
            continue;
        }
        for &(w, _) in graph.neighbors(v) {
            let w = w as usize;
            if let alloc::collections::btree_map::Entry::Vacant(slot) = label.entry(w) {
                slot.insert(vertices.len());
                vertices.push(w);
                distances.push(d + 1);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for &(w, m) in graph.neighbors(v) {
            if let Some(&j) = label.get(&(w as usize)) {
                if i < j {
                    edges.push((i, j, m));
                }
            }
        }
    }
    let sub = MultiGraph::from_edges(vertices.len(), edges)?;
    Ok(Ball { vertices, distances, graph: sub })
}
