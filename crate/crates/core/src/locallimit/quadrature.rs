//! Test oracle: the spine degree laws by direct quadrature over the
//! position density, independent of the samplers.

use alloc::vec::Vec;

use super::degree_law::{degree_pmf, DegreeLawParams};
use crate::Constants;

const STEP: f64 = 0.002;
const Y_MAX: f64 = 90.0;

/// Density of `y = -ln x_i` on a uniform grid. `-ln x_0 ~ Exp(rate 1/chi)`
/// and each further factor adds an independent `Exp(1)`; the convolution
/// is integrated as `h' = f - h` with an exact integrating factor.
fn log_position_density(chi: f64, i: usize) -> Vec<f64> {
    let n = (Y_MAX / STEP) as usize + 1;
    let mut f: Vec<f64> = (0..n)
        .map(|j| libm::exp(-(j as f64 * STEP) / chi) / chi)
        .collect();
    let decay = libm::exp(-STEP);
    for _ in 0..i {
        let mut h = alloc::vec![0.0; n];
        for j in 1..n {
            h[j] = decay * h[j - 1] + 0.5 * STEP * (decay * f[j - 1] + f[j]);
        }
        f = h;
    }
    f
}

/// `P(deg - base = k)` for `k < k_max` for the spine vertex `w_i`.
pub(crate) fn spine_degree_pmf(c: &Constants, i: usize, k_max: u64) -> Vec<f64> {
    let a = if i == 0 { c.urn_shape() } else { c.urn_shape() + 1.0 };
    let dens = log_position_density(c.chi, i);
    let n = dens.len();
    let mut out = alloc::vec![0.0; k_max as usize];
    for (j, &w) in dens.iter().enumerate() {
        // composite Simpson weights
        let s = if j == 0 || j == n - 1 {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        if w == 0.0 {
            continue;
        }
        let x = libm::exp(-(j as f64) * STEP).max(f64::MIN_POSITIVE);
        let p = DegreeLawParams::new(a, c.psi, x).unwrap();
        for (k, slot) in out.iter_mut().enumerate() {
            *slot += s * w * degree_pmf(k as u64, &p);
        }
    }
    for v in &mut out {
        *v *= STEP / 3.0;
    }
    out
}

#[test]
fn density_integrates_to_one() {
    for i in 0..3 {
        let d = log_position_density(0.5, i);
        let total: f64 = d.iter().sum::<f64>() * STEP;
        assert!((total - 1.0).abs() < 1e-2, "i={i}: {total}");
    }
}

#[test]
fn root_law_mean_matches_closed_form() {
    // E[deg(root) - m] = (m + 2mr) E[(1 - x^psi)/x^psi] with x = U^chi,
    // and E[x^-psi] = 1/(1 - chi psi) for chi psi < 1.
    let c = Constants::new(2, 0.3).unwrap();
    let pmf = spine_degree_pmf(&c, 0, 4000);
    let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let expect = c.urn_shape() * (1.0 / (1.0 - c.chi * c.psi) - 1.0);
    assert!((mean - expect).abs() / expect < 2e-2, "{mean} vs {expect}");
}
