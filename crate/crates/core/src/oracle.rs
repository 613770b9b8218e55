//! Exact computations for the contact process on graphs with at most
//! [`MAX_ORACLE_VERTICES`] vertices, with states encoded as bitmasks of the
//! infected set.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::contact::Init;
use crate::math::{exp, ln, ln_gamma};
use crate::{Error, MultiGraph, Result};

pub const MAX_ORACLE_VERTICES: usize = 12;

/// Truncation tolerance on the discarded Poisson mass in uniformization.
pub const UNIFORMIZATION_TOLERANCE: f64 = 1e-12;

/// One off-diagonal generator entry `recoveries + lambda * pressure`,
/// kept in integer form until scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateTerm {
    pub target: u32,
    pub recoveries: u32,
    pub pressure: u64,
}

#[derive(Debug, Clone)]
pub struct StateSpaceCtmc {
    vertices: usize,
    lambda: f64,
    rows: Vec<Vec<RateTerm>>,
    /// Integer parts of the diagonal: `|s|` and the total healthy pressure.
    diagonal: Vec<(u32, u64)>,
}

impl StateSpaceCtmc {
    pub fn new(graph: &MultiGraph, lambda: f64) -> Result<Self> {
        let n = graph.vertex_count();
        if n > MAX_ORACLE_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_ORACLE_VERTICES });
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::out_of_range("lambda", lambda, "finite lambda >= 0"));
        }
        let states = 1usize << n;
        let mut rows = Vec::with_capacity(states);
        let mut diagonal = Vec::with_capacity(states);
        for s in 0..states {
            let mut row = Vec::new();
            let mut total_pressure = 0u64;
            for v in 0..n {
                let bit = 1usize << v;
                if s & bit != 0 {
                    row.push(RateTerm { target: (s & !bit) as u32, recoveries: 1, pressure: 0 });
                } else {
                    let p: u64 = graph
                        .neighbors(v)
                        .iter()
                        .filter(|&&(w, _)| s & (1 << w) != 0)
                        .map(|&(_, m)| m as u64)
                        .sum();
                    if p > 0 {
                        row.push(RateTerm { target: (s | bit) as u32, recoveries: 0, pressure: p });
                        total_pressure += p;
                    }
                }
            }
            diagonal.push((s.count_ones(), total_pressure));
            rows.push(row);
        }
        Ok(StateSpaceCtmc { vertices: n, lambda, rows, diagonal })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn state_count(&self) -> usize {
        self.rows.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn transitions(&self, s: usize) -> &[RateTerm] {
        &self.rows[s]
    }

    /// Integer check that each row of the generator sums to zero.
    pub fn is_conservative(&self) -> bool {
        self.rows.iter().zip(&self.diagonal).all(|(row, &(rec, p))| {
            row.iter().map(|t| t.recoveries).sum::<u32>() == rec && row.iter().map(|t| t.pressure).sum::<u64>() == p
        })
    }

    pub fn rate(&self, term: &RateTerm) -> f64 {
        term.recoveries as f64 + self.lambda * term.pressure as f64
    }

    pub fn exit_rate(&self, s: usize) -> f64 {
        let (rec, p) = self.diagonal[s];
        rec as f64 + self.lambda * p as f64
    }

    /// Dense generator, for cross-checks on small chains.
    pub fn generator(&self) -> DMatrix<f64> {
        let k = self.state_count();
        let mut q = DMatrix::zeros(k, k);
        for s in 0..k {
            q[(s, s)] = -self.exit_rate(s);
            for t in &self.rows[s] {
                q[(s, t.target as usize)] += self.rate(t);
            }
        }
        q
    }

    fn mask(&self, init: &Init) -> Result<usize> {
        let flags = init.flags(self.vertices)?;
        Ok(flags.iter().enumerate().filter(|(_, &f)| f).map(|(v, _)| 1usize << v).sum())
    }

    /// States reachable from `start`, in increasing order.
    fn reachable(&self, start: usize) -> Vec<usize> {
        let mut seen = alloc::vec![false; self.state_count()];
        let mut stack = alloc::vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            for t in &self.rows[s] {
                let u = t.target as usize;
                if !seen[u] && self.rate(t) > 0.0 {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        (0..seen.len()).filter(|&s| seen[s]).collect()
    }

    /// Mean absorption time from `init`, from `-Q_T tau = 1` over the
    /// transient states reachable from `init`.
    pub fn expected_extinction_time(&self, init: &Init) -> Result<f64> {
        let start = self.mask(init)?;
        let transient: Vec<usize> = self.reachable(start).into_iter().filter(|&s| s != 0).collect();
        let mut index = alloc::vec![usize::MAX; self.state_count()];
        for (i, &s) in transient.iter().enumerate() {
            index[s] = i;
        }
        let k = transient.len();
        let mut a = DMatrix::<f64>::zeros(k, k);
        for (i, &s) in transient.iter().enumerate() {
            a[(i, i)] = self.exit_rate(s);
            for t in &self.rows[s] {
                let j = index[t.target as usize];
                if j != usize::MAX {
                    a[(i, j)] -= self.rate(t);
                }
            }
        }
        let tau = a.lu().solve(&DVector::from_element(k, 1.0)).ok_or(Error::SingularSystem)?;
        let value = tau[index[start]];
        if !value.is_finite() {
            return Err(Error::SingularSystem);
        }
        Ok(value)
    }

    /// Distribution at time `t` from `init` by uniformization. `extra_terms`
    /// extends the Poisson sum beyond the tolerance-based cut.
    pub fn distribution_at(&self, init: &Init, t: f64, extra_terms: usize) -> Result<Vec<f64>> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::out_of_range("t", t, "finite t >= 0"));
        }
        let start = self.mask(init)?;
        let k = self.state_count();
        let mut current = alloc::vec![0.0; k];
        current[start] = 1.0;
        let rate = (0..k).map(|s| self.exit_rate(s)).fold(0.0, f64::max);
        if rate == 0.0 || t == 0.0 {
            return Ok(current);
        }
        let mean = rate * t;
        let log_mean = ln(mean);
        let mut result = alloc::vec![0.0; k];
        let mut next = alloc::vec![0.0; k];
        let mut mass = 0.0;
        let mut step = 0usize;
        let mut extra = 0usize;
        loop {
            let weight = exp(-mean + step as f64 * log_mean - ln_gamma(step as f64 + 1.0));
            mass += weight;
            if weight > 0.0 {
                for (r, c) in result.iter_mut().zip(&current) {
                    *r += weight * c;
                }
            }
            if (step as f64) >= mean && 1.0 - mass < UNIFORMIZATION_TOLERANCE {
                if extra == extra_terms {
                    break;
                }
                extra += 1;
            }
            next.iter_mut().for_each(|x| *x = 0.0);
            for s in 0..k {
                let p = current[s];
                if p == 0.0 {
                    continue;
                }
                next[s] += p * (1.0 - self.exit_rate(s) / rate);
                for term in &self.rows[s] {
                    next[term.target as usize] += p * self.rate(term) / rate;
                }
            }
            core::mem::swap(&mut current, &mut next);
            step += 1;
        }
        Ok(result)
    }

    pub fn survival_probability_at(&self, init: &Init, t: f64) -> Result<f64> {
        self.survival_probability_with_terms(init, t, 0)
    }

    pub fn survival_probability_with_terms(&self, init: &Init, t: f64, extra_terms: usize) -> Result<f64> {
        let dist = self.distribution_at(init, t, extra_terms)?;
        Ok(dist[1..].iter().sum())
    }

    /// `E|xi_t|` from `init`.
    pub fn expected_size_at(&self, init: &Init, t: f64) -> Result<f64> {
        let dist = self.distribution_at(init, t, 0)?;
        Ok(dist.iter().enumerate().map(|(s, p)| s.count_ones() as f64 * p).sum())
    }
}

pub fn expected_extinction_time(graph: &MultiGraph, lambda: f64, init: &Init) -> Result<f64> {
    StateSpaceCtmc::new(graph, lambda)?.expected_extinction_time(init)
}

pub fn survival_probability_at(graph: &MultiGraph, lambda: f64, init: &Init, t: f64) -> Result<f64> {
    StateSpaceCtmc::new(graph, lambda)?.survival_probability_at(init, t)
}

/// `(sum_v P(xi^v_t nonempty), E|xi^full_t|)`: the two sides of the
/// self-duality identity, each computed exactly.
pub fn duality_identity_check(graph: &MultiGraph, lambda: f64, t: f64) -> Result<(f64, f64)> {
    let chain = StateSpaceCtmc::new(graph, lambda)?;
    let mut lhs = 0.0;
    for v in 0..graph.vertex_count() {
        lhs += chain.survival_probability_at(&Init::Single(v), t)?;
    }
    let rhs = chain.expected_size_at(&Init::Full, t)?;
    Ok((lhs, rhs))
}

/// Mean extinction time on a star with `leaf_count` leaves from the
/// infected centre. Leaves are exchangeable, so the chain is solved on
/// (centre state, number of infected leaves), which has `2 leaf_count + 1`
/// transient states and no vertex bound.
///
/// Mean times grow like `exp(c lambda^2 leaf_count)`, and a plain LU solve
/// loses all accuracy once they pass about `1e12`. The solve therefore
/// uses [`absorption_times_by_elimination`], which has no cancellation.
pub fn star_expected_extinction_time(leaf_count: usize, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::out_of_range("lambda", lambda, "finite lambda >= 0"));
    }
    let n = leaf_count;
    // interleaved order keeps the elimination banded: (1,0), (0,1), (1,1), (0,2), ...
    let idx = |centre: bool, k: usize| 2 * k + usize::from(centre) - 1;
    let size = 2 * n + 1;
    let mut rates: Vec<BTreeMap<usize, f64>> = alloc::vec![BTreeMap::new(); size];
    let mut exit = alloc::vec![0.0; size];
    for k in 0..=n {
        for centre in [false, true] {
            if !centre && k == 0 {
                continue;
            }
            let i = idx(centre, k);
            let mut add = |c: bool, j: usize, rate: f64| {
                if rate <= 0.0 {
                    return;
                }
                if !c && j == 0 {
                    exit[i] += rate;
                } else {
                    *rates[i].entry(idx(c, j)).or_insert(0.0) += rate;
                }
            };
            if centre {
                add(false, k, 1.0);
                add(true, k + 1, lambda * (n - k) as f64);
            } else {
                add(true, k, lambda * k as f64);
            }
            if k > 0 {
                add(centre, k - 1, k as f64);
            }
        }
    }
    let tau = absorption_times_by_elimination(rates, exit)?;
    Ok(tau[idx(true, 0)])
}

/// Mean absorption times of a continuous-time chain by state reduction.
///
/// `rates[i]` maps each other transient state to its jump rate and
/// `exit[i]` is the total rate into the absorbing set. States are
/// eliminated in index order; every update adds non-negative terms and each
/// state's total rate is a sum of its remaining outgoing rates rather than
/// a diagonal difference, so relative accuracy does not degrade with the
/// size of the answer.
pub fn absorption_times_by_elimination(mut rates: Vec<BTreeMap<usize, f64>>, mut exit: Vec<f64>) -> Result<Vec<f64>> {
    let size = rates.len();
    if exit.len() != size {
        return Err(Error::TooFewPoints { got: exit.len(), required: size });
    }
    let mut incoming: Vec<Vec<usize>> = alloc::vec![Vec::new(); size];
    for (i, row) in rates.iter_mut().enumerate() {
        row.remove(&i);
        for &j in row.keys() {
            incoming[j].push(i);
        }
    }
    // expected holding time accumulated per visit
    let mut reward = alloc::vec![1.0; size];
    let mut reduced: Vec<(f64, Vec<(usize, f64)>)> = Vec::with_capacity(size);
    for k in 0..size {
        let out: Vec<(usize, f64)> = core::mem::take(&mut rates[k]).into_iter().filter(|&(j, _)| j > k).collect();
        let total = exit[k] + out.iter().map(|&(_, r)| r).sum::<f64>();
        if !(total > 0.0) {
            return Err(Error::SingularSystem);
        }
        let mut preds = core::mem::take(&mut incoming[k]);
        preds.sort_unstable();
        preds.dedup();
        for i in preds.into_iter().filter(|&i| i > k) {
            let Some(r) = rates[i].remove(&k) else { continue };
            let f = r / total;
            reward[i] += f * reward[k];
            exit[i] += f * exit[k];
            for &(j, rj) in &out {
                if j != i {
                    let e = rates[i].entry(j).or_insert(0.0);
                    if *e == 0.0 {
                        incoming[j].push(i);
                    }
                    *e += f * rj;
                }
            }
        }
        reduced.push((total, out));
    }
    let mut tau = alloc::vec![0.0; size];
    for k in (0..size).rev() {
        let (total, out) = &reduced[k];
        tau[k] = (reward[k] + out.iter().map(|&(j, r)| r * tau[j]).sum::<f64>()) / total;
    }
    Ok(tau)
}
