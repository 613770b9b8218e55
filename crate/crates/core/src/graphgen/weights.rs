use alloc::vec::Vec;

use rand::Rng;

use super::{beta_via_gammas, Constants};
use crate::math::{exp, ln_1p};
use crate::{Error, Result};

/// One realization of the urn weights for an `n`-vertex graph.
///
/// All accessors are 1-based to match vertex labels `v_1..v_n`.
/// `S_k = prod_{t=k+1..n} (1 - psi_t)` is kept as its logarithm, so that
/// `S_k`, `phi_j = psi_j S_j` and the partial products `S_i^(j)` never
/// underflow, and `S_n = exp(0) = 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaWeights {
    // index 0 is a placeholder so that index j holds psi_j
    psi: Vec<f64>,
    log_tail: Vec<f64>,
    s_prefix: Vec<f64>,
}

pub fn sample_weights<R: Rng + ?Sized>(n: usize, constants: &Constants, rng: &mut R) -> Result<PolyaWeights> {
    if n < 2 {
        return Err(Error::out_of_range("n", n as f64, "n >= 2"));
    }
    let mut psi = alloc::vec![0.0; n + 1];
    let mut log_one_minus = alloc::vec![f64::NEG_INFINITY; n + 1];
    psi[1] = 1.0;
    for j in 2..=n {
        let (a, b) = constants.beta_params(j)?;
        let (p, l) = beta_via_gammas(a, b, rng);
        psi[j] = p;
        log_one_minus[j] = l;
    }
    Ok(PolyaWeights::assemble(psi, &log_one_minus))
}

impl PolyaWeights {
    /// Rebuilds weights from `psi_1..psi_n` (e.g. read back from a file).
    pub fn from_psi(psi: &[f64]) -> Result<Self> {
        if psi.len() < 2 {
            return Err(Error::out_of_range("n", psi.len() as f64, "n >= 2"));
        }
        if psi[0] != 1.0 {
            return Err(Error::out_of_range("psi_1", psi[0], "psi_1 = 1"));
        }
        if let Some(&bad) = psi[1..].iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(Error::out_of_range("psi_j", bad, "0 < psi_j < 1 for j >= 2"));
        }
        let mut full = alloc::vec![0.0];
        full.extend_from_slice(psi);
        let log_one_minus: Vec<f64> = full
            .iter()
            .enumerate()
            .map(|(j, &p)| if j < 2 { f64::NEG_INFINITY } else { ln_1p(-p) })
            .collect();
        Ok(Self::assemble(full, &log_one_minus))
    }

    fn assemble(psi: Vec<f64>, log_one_minus: &[f64]) -> Self {
        let n = psi.len() - 1;
        let mut log_tail = alloc::vec![0.0; n + 1];
        for k in (0..n).rev() {
            log_tail[k] = log_tail[k + 1] + log_one_minus[k + 1];
        }
        let s_prefix = log_tail.iter().map(|&l| exp(l)).collect();
        PolyaWeights {
            psi,
            log_tail,
            s_prefix,
        }
    }

    pub fn n(&self) -> usize {
        self.psi.len() - 1
    }

    /// `psi_j`, `1 <= j <= n`.
    pub fn psi(&self, j: usize) -> f64 {
        self.psi[j]
    }

    /// `psi_1..psi_n` in order.
    pub fn psi_values(&self) -> &[f64] {
        &self.psi[1..]
    }

    /// `ln S_k = sum_{t=k+1..n} ln(1 - psi_t)`, `0 <= k <= n`.
    pub fn log_tail(&self, k: usize) -> f64 {
        self.log_tail[k]
    }

    /// `S_k`, `0 <= k <= n`, with `S_0 = 0` and `S_n = 1`.
    pub fn s(&self, k: usize) -> f64 {
        self.s_prefix[k]
    }

    /// `S_0..S_n`.
    pub fn s_prefix(&self) -> &[f64] {
        &self.s_prefix
    }

    /// `phi_j = psi_j prod_{t=j+1..n} (1 - psi_t)`: the length of `I_j`.
    pub fn phi(&self, j: usize) -> f64 {
        self.psi[j] * exp(self.log_tail[j])
    }

    /// `S_i^(j) = prod_{t=i+1..j} (1 - psi_t)` for `1 <= i <= j <= n`.
    pub fn tail_product(&self, i: usize, j: usize) -> f64 {
        exp(self.log_tail[i] - self.log_tail[j])
    }

    /// Index `j` of the interval `I_j = [S_{j-1}, S_j)` containing `u`,
    /// restricted to `j < k` (the caller draws `u` from `[0, S_{k-1})`).
    pub(crate) fn locate(&self, u: f64, k: usize) -> usize {
        let j = self.s_prefix[..k].partition_point(|&s| s <= u);
        // u can round up to S_{k-1}; it then belongs to the last interval
        j.clamp(1, k - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn s_n_is_exactly_one() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3, 10, 1000] {
            let w = sample_weights(n, &c, &mut rng).unwrap();
            assert_eq!(w.s(n), 1.0);
            assert_eq!(w.s(0), 0.0);
            assert_eq!(w.psi(1), 1.0);
        }
    }

    #[test]
    fn n_below_two_rejected() {
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_weights(1, &c, &mut rng).is_err());
    }

    #[test]
    fn prefix_sums_match_phi_cumsum() {
        let c = Constants::new(3, 0.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = sample_weights(10_000, &c, &mut rng).unwrap();
        let mut cum = 0.0;
        for k in 1..=w.n() {
            cum += w.phi(k);
            assert!(w.s(k) > w.s(k - 1), "S not strictly increasing at {k}");
            assert!((cum - w.s(k)).abs() <= 1e-9 * w.s(k), "k={k}");
        }
    }

    #[test]
    fn log_space_matches_direct_product() {
        // direct product computation as the independent route
        let c = Constants::new(2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = sample_weights(10_000, &c, &mut rng).unwrap();
        let n = w.n();
        let mut direct = 1.0f64;
        for k in (1..=n).rev() {
            assert!((direct - w.s(k)).abs() <= 1e-9 * direct, "k={k}");
            direct *= 1.0 - w.psi(k);
        }
    }

    #[test]
    fn round_trip_through_psi() {
        let c = Constants::new(2, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = sample_weights(50, &c, &mut rng).unwrap();
        let back = PolyaWeights::from_psi(w.psi_values()).unwrap();
        for k in 0..=50 {
            assert!((back.s(k) - w.s(k)).abs() <= 1e-12 * w.s(k).max(1e-300));
        }
        assert!(PolyaWeights::from_psi(&[0.5, 0.5]).is_err());
        assert!(PolyaWeights::from_psi(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn psi_10_mean_matches_beta_mean() {
        // m = 2, alpha = 0: psi_10 ~ Beta(2, 34), mean 2/36
        let c = Constants::new(2, 0.0).unwrap();
        let (a, b) = c.beta_params(10).unwrap();
        assert_eq!((a, b), (2.0, 34.0));
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 100_000;
        let samples: Vec<f64> = (0..draws).map(|_| beta_via_gammas(a, b, &mut rng).0).collect();
        let s = crate::stats::Summary::of(&samples);
        let expect = a / (a + b);
        assert!((s.mean - expect).abs() < 3.0 * s.std_error, "{} vs {}", s.mean, expect);
    }

    #[test]
    fn concentration_of_prefix_sums() {
        // |S_k - (k/n)^chi| <= 0.1 (k/n)^chi for at least 99% of k in [1e3, n]
        let c = Constants::new(2, 0.0).unwrap();
        let n = 100_000;
        let mut good_seeds = 0;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = sample_weights(n, &c, &mut rng).unwrap();
            let mut ok = 0;
            for k in 1000..=n {
                let target = libm::pow(k as f64 / n as f64, c.chi);
                if (w.s(k) - target).abs() <= 0.1 * target {
                    ok += 1;
                }
            }
            if ok as f64 >= 0.99 * (n - 999) as f64 {
                good_seeds += 1;
            }
        }
        assert!(good_seeds >= 19, "{good_seeds}/20 seeds concentrated");
    }
}
