use rand::Rng;

use super::{open01, sample_gamma, sample_poisson_capped, HUGE_MEAN};
use crate::math::{exp, ln, ln_1p, ln_factorial, ln_gamma, powf};
use crate::{Constants, Error, Result};

/// Parameters of the conditional degree law of a type-L vertex at position
/// `x`: `deg = m + 1 + k` with
/// `P(k | x) = Gamma(k + a) / (Gamma(a) k!) (1 - x^psi)^k x^(a psi)`,
/// i.e. Poisson with mean `gamma (1 - x^psi) / x^psi` mixed over
/// `gamma ~ Gamma(a, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeLawParams {
    pub a: f64,
    pub psi: f64,
    pub x: f64,
}

impl DegreeLawParams {
    pub fn new(a: f64, psi: f64, x: f64) -> Result<Self> {
        if !(a > 1.0) {
            return Err(Error::out_of_range("a", a, "a > 1"));
        }
        if !(psi > 0.0 && psi <= 1.0) {
            return Err(Error::out_of_range("psi", psi, "0 < psi <= 1"));
        }
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::out_of_range("x", x, "0 < x <= 1"));
        }
        Ok(DegreeLawParams { a, psi, x })
    }

    /// Law of a type-L vertex: `a = m + 2mr + 1`.
    pub fn type_l(constants: &Constants, x: f64) -> Result<Self> {
        Self::new(constants.urn_shape() + 1.0, constants.psi, x)
    }

    /// `kappa = (1 - x^psi) / x^psi`, the Poisson mean per unit of gamma.
    pub fn kappa(&self) -> f64 {
        poisson_scale(self.x, self.psi)
    }
}

/// Evaluated in log space through `ln Gamma`.
pub fn degree_pmf(k: u64, params: &DegreeLawParams) -> f64 {
    let DegreeLawParams { a, psi, x } = *params;
    let x_psi = powf(x, psi);
    let log_weight = a * psi * ln(x);
    if k == 0 {
        return exp(log_weight);
    }
    if x_psi >= 1.0 {
        return 0.0;
    }
    let kf = k as f64;
    exp(ln_gamma(kf + a) - ln_gamma(a) - ln_factorial(k) + kf * ln_1p(-x_psi) + log_weight)
}

/// `x_i = U_i ... U_1 U_0^chi`: the position of the `i`-th vertex down the
/// all-L spine from the root (`U_0^chi = U_0^(1/(1+psi))`).
pub fn sample_position_chain<R: Rng + ?Sized>(i: usize, constants: &Constants, rng: &mut R) -> f64 {
    let mut x = powf(open01(rng), constants.chi);
    for _ in 0..i {
        x *= open01(rng);
    }
    x
}

/// Degree of the spine vertex `w_i`. For `i >= 1`: `m + 1 + Poisson(gamma kappa)`
/// with `gamma ~ Gamma(m + 2mr + 1)`. For the root (`i = 0`): `m + Poisson`
/// with `gamma ~ Gamma(m + 2mr)`.
pub fn sample_qi_degree<R: Rng + ?Sized>(i: usize, constants: &Constants, rng: &mut R) -> u64 {
    let x = sample_position_chain(i, constants, rng);
    let (shape, base) = if i == 0 {
        (constants.urn_shape(), constants.m as u64)
    } else {
        (constants.urn_shape() + 1.0, constants.m as u64 + 1)
    };
    let mean = sample_gamma(shape, rng) * poisson_scale(x, constants.psi);
    if mean > HUGE_MEAN || !mean.is_finite() {
        return base + HUGE_MEAN as u64;
    }
    base + sample_poisson_capped(mean, u64::MAX, rng).0
}

pub(crate) fn poisson_scale(x: f64, psi: f64) -> f64 {
    let x_psi = powf(x, psi);
    (1.0 - x_psi) / x_psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locallimit::quadrature;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    fn p_value(chi: &crate::stats::ChiSquare) -> f64 {
        1.0 - ChiSquared::new(chi.dof as f64).unwrap().cdf(chi.statistic)
    }

    #[test]
    fn zero_term_is_x_to_a_psi() {
        let p = DegreeLawParams::new(3.0, 0.5, 0.3).unwrap();
        assert!((degree_pmf(0, &p) - libm::pow(0.3, 1.5)).abs() < 1e-15);
        let edge = DegreeLawParams::new(3.0, 1.0, 1.0).unwrap();
        assert_eq!(degree_pmf(0, &edge), 1.0);
        assert_eq!(degree_pmf(4, &edge), 0.0);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(DegreeLawParams::new(1.0, 1.0, 0.5).is_err());
        assert!(DegreeLawParams::new(3.0, 1.0, 0.0).is_err());
        assert!(DegreeLawParams::new(3.0, 1.0, 1.5).is_err());
        assert!(DegreeLawParams::new(3.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn pmf_normalises() {
        for &(x, a, psi) in &[(0.5, 3.0, 1.0), (0.05, 3.0, 1.0), (0.9, 5.0, 0.5), (0.2, 2.5, 0.3), (0.01, 7.0, 0.75)] {
            let p = DegreeLawParams::new(a, psi, x).unwrap();
            let mut total = 0.0;
            let mut k = 0u64;
            // adaptive truncation: stop once past the mean and terms are negligible
            let mean = a * p.kappa();
            loop {
                let term = degree_pmf(k, &p);
                assert!(term >= 0.0);
                total += term;
                k += 1;
                if k as f64 > mean && term < 1e-16 {
                    break;
                }
            }
            assert!((1.0 - total).abs() < 1e-10, "x={x} a={a}: {total}");
        }
    }

    #[test]
    fn pmf_matches_mixed_poisson_sampling() {
        // x = 0.5, a = 3, psi = 1: Poisson(gamma (1 - x)/x), gamma ~ Gamma(3)
        let p = DegreeLawParams::new(3.0, 1.0, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let draws: Vec<u64> = (0..1_000_000)
            .map(|_| {
                let g = sample_gamma(3.0, &mut rng);
                sample_poisson_capped(g * p.kappa(), u64::MAX, &mut rng).0
            })
            .collect();
        let probs: Vec<f64> = (0..60).map(|k| degree_pmf(k, &p)).collect();
        let chi = crate::stats::chi_square_goodness_of_fit(&draws, &probs, 5.0);
        assert!(p_value(&chi) > 0.01, "chi2 {} dof {}", chi.statistic, chi.dof);
    }

    #[test]
    fn position_chain_moments() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (i, expect) in [(0usize, 1.0 / (1.0 + c.chi)), (1, 1.0 / (2.0 * (1.0 + c.chi)))] {
            let xs: Vec<f64> = (0..100_000).map(|_| sample_position_chain(i, &c, &mut rng)).collect();
            assert!(xs.iter().all(|&x| x > 0.0 && x <= 1.0));
            let s = crate::stats::Summary::of(&xs);
            assert!((s.mean - expect).abs() < 3.0 * s.std_error, "i={i}: {} vs {expect}", s.mean);
        }
    }

    #[test]
    fn qi_degree_floors() {
        let c = Constants::new(3, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10_000 {
            assert!(sample_qi_degree(0, &c, &mut rng) >= 3);
            assert!(sample_qi_degree(1, &c, &mut rng) >= 4);
            assert!(sample_qi_degree(4, &c, &mut rng) >= 4);
        }
    }

    #[test]
    fn qi_degree_matches_numeric_integration() {
        for (m, alpha) in [(2u32, 0.0), (2, 1.0 / 3.0)] {
            let c = Constants::new(m, alpha).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(14 + m as u64);
            for i in 0..=2usize {
                let base = if i == 0 { m as u64 } else { m as u64 + 1 };
                let probs = quadrature::spine_degree_pmf(&c, i, 80);
                let draws: Vec<u64> = (0..200_000)
                    .map(|_| sample_qi_degree(i, &c, &mut rng) - base)
                    .collect();
                let chi = crate::stats::chi_square_goodness_of_fit(&draws, &probs, 5.0);
                assert!(p_value(&chi) > 0.01, "alpha={alpha} i={i}: chi2 {} dof {}", chi.statistic, chi.dof);
            }
        }
    }

    #[test]
    fn spine_laws_increase_stochastically() {
        // q_i <= q_{i+1}: empirical CDFs of the excess over m+1 ordered with slack
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let n = 200_000;
        let cdf = |i: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
            let mut counts = alloc::vec![0u64; 41];
            for _ in 0..n {
                // degree measured from m + 1 for every i, so the root's
                // extra missing parent shows as one step lower
                let d = sample_qi_degree(i, &c, rng) as i64 - 3;
                let k = d.clamp(-1, 39) + 1;
                counts[k as usize] += 1;
            }
            let mut acc = 0u64;
            counts.iter().map(|&c| { acc += c; acc as f64 / n as f64 }).collect()
        };
        let cdfs: Vec<Vec<f64>> = (0..=3).map(|i| cdf(i, &mut rng)).collect();
        for i in 0..3 {
            for k in 0..40 {
                let (lo, hi) = (cdfs[i + 1][k], cdfs[i][k]);
                let se = libm::sqrt((lo * (1.0 - lo) + hi * (1.0 - hi)) / n as f64);
                assert!(lo <= hi + 3.0 * se, "i={i} k={k}: F_(i+1)={lo} > F_i={hi}");
            }
        }
    }
}
