//! Preferential attachment multigraphs, built two independent ways.
//!
//! [`build_polya_graph`] uses the urn representation: independent Beta
//! weights `psi_j` cut `[0, 1)` into intervals `I_j`, and each new vertex
//! drops `m` uniform points into the prefix `[0, S_{k-1})`.
//! [`build_sequential_graph`] grows the graph one vertex at a time with the
//! mixed uniform / degree-proportional rule. The two have the same law.

mod constants;
mod sequential;
mod urn;
mod weights;

pub use constants::{derive_constants, Constants};
pub use sequential::build_sequential_graph;
pub use urn::{build_polya_graph, edge_probability, EdgeProbability};
pub use weights::{sample_weights, PolyaWeights};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// Beta(a, b) drawn as `X / (X + Y)` with independent Gamma variates.
/// Returns `(psi, ln(1 - psi))`; the second value is computed from the
/// Gamma pair so it stays accurate when `psi` is close to 0 or 1.
pub(crate) fn beta_via_gammas<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> (f64, f64) {
    let x: f64 = Gamma::new(a, 1.0).expect("positive shape").sample(rng);
    let y: f64 = Gamma::new(b, 1.0).expect("positive shape").sample(rng);
    let s = x + y;
    (x / s, crate::math::ln(y) - crate::math::ln(s))
}
