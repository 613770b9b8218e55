use alloc::vec::Vec;

use super::fenwick::Fenwick;
use crate::{Error, MultiGraph, Result};

/// Initial infected set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Init {
    Full,
    Single(usize),
    Set(Vec<usize>),
}

impl Init {
    pub(crate) fn flags(&self, n: usize) -> Result<Vec<bool>> {
        if n == 0 {
            return Err(Error::EmptyInit);
        }
        let mut flags = alloc::vec![false; n];
        match self {
            Init::Full => flags.iter_mut().for_each(|f| *f = true),
            Init::Single(v) => *flags.get_mut(*v).ok_or(Error::VertexOutOfRange { vertex: *v, n })? = true,
            Init::Set(vs) => {
                if vs.is_empty() {
                    return Err(Error::EmptyInit);
                }
                for &v in vs {
                    *flags.get_mut(v).ok_or(Error::VertexOutOfRange { vertex: v, n })? = true;
                }
            }
        }
        Ok(flags)
    }
}

/// Infected set plus incrementally maintained infection pressure.
///
/// `pressure(v)` counts edge endpoints from `v` to infected neighbours,
/// with multiplicity, for every vertex. The sampling tree holds the
/// pressure of healthy vertices only.
#[derive(Debug, Clone)]
pub struct ContactState {
    infected: Vec<bool>,
    pressure: Vec<u64>,
    members: Vec<u32>,
    slot: Vec<u32>,
    healthy_pressure: Fenwick,
}

const NO_SLOT: u32 = u32::MAX;

impl ContactState {
    pub fn new(graph: &MultiGraph, init: &Init) -> Result<Self> {
        let flags = init.flags(graph.vertex_count())?;
        Ok(Self::from_flags(graph, &flags))
    }

    pub fn from_flags(graph: &MultiGraph, flags: &[bool]) -> Self {
        let n = graph.vertex_count();
        assert_eq!(flags.len(), n, "one flag per vertex");
        let mut state = ContactState {
            infected: alloc::vec![false; n],
            pressure: alloc::vec![0; n],
            members: Vec::new(),
            slot: alloc::vec![NO_SLOT; n],
            healthy_pressure: Fenwick::new(n),
        };
        for (v, &f) in flags.iter().enumerate() {
            if f {
                state.infect(graph, v);
            }
        }
        state
    }

    pub fn is_infected(&self, v: usize) -> bool {
        self.infected[v]
    }

    pub fn infected_flags(&self) -> &[bool] {
        &self.infected
    }

    pub fn infected_count(&self) -> usize {
        self.members.len()
    }

    /// Infected vertices in no particular order.
    pub fn infected_vertices(&self) -> &[u32] {
        &self.members
    }

    pub fn pressure(&self, v: usize) -> u64 {
        self.pressure[v]
    }

    /// Sum of pressure over healthy vertices, i.e. the infection rate
    /// divided by lambda.
    pub fn healthy_pressure_total(&self) -> u64 {
        self.healthy_pressure.total()
    }

    pub fn total_recovery_rate(&self) -> f64 {
        self.members.len() as f64
    }

    pub fn total_infection_rate(&self, lambda: f64) -> f64 {
        lambda * self.healthy_pressure.total() as f64
    }

    pub fn is_absorbed(&self) -> bool {
        self.members.is_empty()
    }

    /// Marks `v` infected. No-op if already infected.
    pub fn infect(&mut self, graph: &MultiGraph, v: usize) {
        if self.infected[v] {
            return;
        }
        self.infected[v] = true;
        self.slot[v] = self.members.len() as u32;
        self.members.push(v as u32);
        self.healthy_pressure.set(v, 0);
        for &(w, mult) in graph.neighbors(v) {
            let w = w as usize;
            self.pressure[w] += mult as u64;
            if !self.infected[w] {
                self.healthy_pressure.add(w, mult as u64);
            }
        }
    }

    /// Marks `v` healthy. No-op if already healthy.
    pub fn recover(&mut self, graph: &MultiGraph, v: usize) {
        if !self.infected[v] {
            return;
        }
        self.infected[v] = false;
        let s = self.slot[v] as usize;
        self.members.swap_remove(s);
        if let Some(&moved) = self.members.get(s) {
            self.slot[moved as usize] = s as u32;
        }
        self.slot[v] = NO_SLOT;
        for &(w, mult) in graph.neighbors(v) {
            let w = w as usize;
            self.pressure[w] -= mult as u64;
            if !self.infected[w] {
                self.healthy_pressure.sub(w, mult as u64);
            }
        }
        self.healthy_pressure.set(v, self.pressure[v]);
    }

    /// Healthy vertex whose cumulative pressure interval contains `target`.
    pub(crate) fn infection_target(&self, target: u64) -> usize {
        self.healthy_pressure.find(target)
    }

    pub(crate) fn infected_at(&self, index: usize) -> usize {
        self.members[index] as usize
    }

    /// Recomputes pressure from scratch and compares it with the
    /// incrementally maintained values, including the sampling tree.
    pub fn is_consistent(&self, graph: &MultiGraph) -> bool {
        let n = graph.vertex_count();
        let mut fresh = alloc::vec![0u64; n];
        for e in graph.edges() {
            let (u, v, m) = (e.u as usize, e.v as usize, e.multiplicity as u64);
            if self.infected[u] {
                fresh[v] += m;
            }
            if self.infected[v] {
                fresh[u] += m;
            }
        }
        let count = self.infected.iter().filter(|&&f| f).count();
        fresh == self.pressure
            && count == self.members.len()
            && self.members.iter().enumerate().all(|(i, &v)| self.slot[v as usize] as usize == i && self.infected[v as usize])
            && (0..n).all(|v| self.healthy_pressure.get(v) == if self.infected[v] { 0 } else { fresh[v] })
            && self.healthy_pressure.total() == (0..n).filter(|&v| !self.infected[v]).map(|v| fresh[v]).sum::<u64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_counts_multiplicity() {
        let g = MultiGraph::from_edges(3, [(0, 1, 2), (1, 2, 1)]).unwrap();
        let mut s = ContactState::new(&g, &Init::Single(1)).unwrap();
        assert_eq!(s.pressure(0), 2);
        assert_eq!(s.pressure(2), 1);
        assert_eq!(s.healthy_pressure_total(), 3);
        s.infect(&g, 0);
        assert_eq!(s.healthy_pressure_total(), 1);
        assert_eq!(s.pressure(1), 2);
        s.recover(&g, 1);
        assert_eq!(s.healthy_pressure_total(), 2);
        assert!(s.is_consistent(&g));
    }

    #[test]
    fn init_errors() {
        let g = MultiGraph::path(3);
        assert_eq!(ContactState::new(&g, &Init::Set(alloc::vec![])).unwrap_err(), Error::EmptyInit);
        assert!(matches!(ContactState::new(&g, &Init::Single(3)), Err(Error::VertexOutOfRange { .. })));
        let empty = MultiGraph::from_edges(0, core::iter::empty()).unwrap();
        assert!(ContactState::new(&empty, &Init::Full).is_err());
    }
}
