use crate::{Error, Result};

/// Model parameters `(m, alpha)` and everything derived from them.
///
/// `r = alpha / (1 - alpha)`, `chi = (1 + 2r) / (2 + 2r)`,
/// `psi = 1 / (1 + 2r) = (1 - chi) / chi`, and the degree power-law exponent
/// `nu = 2 + 1 / psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub m: u32,
    pub alpha: f64,
    pub r: f64,
    pub chi: f64,
    pub psi: f64,
    pub nu: f64,
}

pub fn derive_constants(m: u32, alpha: f64) -> Result<Constants> {
    Constants::new(m, alpha)
}

impl Constants {
    pub fn new(m: u32, alpha: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::out_of_range("m", m as f64, "m >= 2"));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::out_of_range("alpha", alpha, "0 <= alpha < 1"));
        }
        let r = alpha / (1.0 - alpha);
        Ok(Constants {
            m,
            alpha,
            r,
            chi: (1.0 + 2.0 * r) / (2.0 + 2.0 * r),
            psi: 1.0 / (1.0 + 2.0 * r),
            nu: 2.0 + (1.0 + 2.0 * r),
        })
    }

    /// Pure uniform attachment (`alpha = 1`). Only the sequential builder
    /// accepts this; it exists as a test oracle.
    #[cfg(test)]
    pub(crate) fn uniform_attachment(m: u32) -> Self {
        Constants {
            m,
            alpha: 1.0,
            r: f64::INFINITY,
            chi: 1.0,
            psi: 0.0,
            nu: f64::INFINITY,
        }
    }

    /// `m + 2mr`: first Beta parameter, and the Gamma shape of the root and
    /// of type-R nodes in the Pólya-point tree.
    pub fn urn_shape(&self) -> f64 {
        let m = self.m as f64;
        m + 2.0 * m * self.r
    }

    /// Parameters of `psi_j ~ Beta(m + 2mr, (2j - 3)m + 2mr(j - 1))` for
    /// `j >= 2` (`psi_1` is the constant 1).
    pub fn beta_params(&self, j: usize) -> Result<(f64, f64)> {
        if j < 2 {
            return Err(Error::out_of_range("j", j as f64, "j >= 2"));
        }
        let m = self.m as f64;
        let j = j as f64;
        Ok((
            self.urn_shape(),
            (2.0 * j - 3.0) * m + 2.0 * m * self.r * (j - 1.0),
        ))
    }
}
