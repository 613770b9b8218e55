//! The Pólya-point tree (local weak limit of the preferential attachment
//! graph), its mixed-Poisson degree laws, and the Galton–Watson trees that
//! dominate its balls.

mod degree_law;
mod gw;
mod pptree;

pub use degree_law::{degree_pmf, sample_position_chain, sample_qi_degree, DegreeLawParams};
pub use gw::sample_gw_ball;
pub use pptree::{sample_ppt, NodeType, PPNode, PolyaPointTree, DEFAULT_DEGREE_CAP};

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

#[cfg(test)]
pub(crate) mod quadrature;

/// Means above this are treated as "certainly above any cap".
const HUGE_MEAN: f64 = 1e15;

pub(crate) fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0).expect("positive shape").sample(rng)
}

/// Poisson count with the given mean, cut at `cap`. Returns the count and
/// whether the cut was applied.
pub(crate) fn sample_poisson_capped<R: Rng + ?Sized>(mean: f64, cap: u64, rng: &mut R) -> (u64, bool) {
    if !(mean > 0.0) {
        return (0, false);
    }
    if mean > HUGE_MEAN {
        return (cap, true);
    }
    let k = Poisson::new(mean).expect("finite positive mean").sample(rng) as u64;
    if k > cap {
        (cap, true)
    } else {
        (k, false)
    }
}

/// Uniform on the open interval (0, 1).
pub(crate) fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rand_distr::Open01.sample(rng)
}
