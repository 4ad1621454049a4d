//! Noisy homodyne measurement with Gaussian conditioning.
//!
//! The readout of a quadrature q is modeled as a Gaussian POVM of width
//! delta around the true value, so the outcome distribution has variance
//! Var(q) + delta^2. Conditioning the remaining modes is the standard
//! Schur-complement update restricted to the measured row/column.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::GaussianState;
use crate::error::{Error, Result};

/// Which quadrature of a mode a homodyne detector reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

impl GaussianState {
    /// Measures one quadrature of `mode` with detector noise amplitude
    /// `delta` (POVM width). If `record` is `None`, an outcome is sampled
    /// from the Gaussian outcome distribution using `rng`; otherwise the
    /// given record is conditioned on.
    ///
    /// Returns the measurement record and the conditioned state with the
    /// measured mode removed.
    pub fn homodyne_measure<R: Rng + ?Sized>(
        &self,
        mode: usize,
        quadrature: Quadrature,
        delta: f64,
        record: Option<f64>,
        rng: &mut R,
    ) -> Result<(f64, GaussianState)> {
        self.check_mode(mode)?;
        if delta < 0.0 {
            return Err(Error::NegativeNoise(delta));
        }

        let k = 2 * mode
            + match quadrature {
                Quadrature::X => 0,
                Quadrature::P => 1,
            };
        let outcome_var = self.cov()[(k, k)] + delta * delta;
        debug_assert!(outcome_var > 0.0, "outcome distribution degenerate");

        let y = match record {
            Some(y) => y,
            None => Normal::new(self.mean()[k], outcome_var.sqrt())
                .expect("valid normal parameters")
                .sample(rng),
        };

        // m' = m + b (y - m_k) / v,  V' = V - b b^T / v, with b = V e_k.
        let b: DVector<f64> = self.cov().column(k).into();
        let gain = (y - self.mean()[k]) / outcome_var;
        let mean = self.mean() + &b * gain;
        let cov: DMatrix<f64> = self.cov() - &b * b.transpose() / outcome_var;

        let keep: Vec<usize> = (0..self.n_modes()).filter(|&m| m != mode).collect();
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let dim = idx.len();
        let mut mean_out = DVector::zeros(dim);
        let mut cov_out = DMatrix::zeros(dim, dim);
        for (a, &ia) in idx.iter().enumerate() {
            mean_out[a] = mean[ia];
            for (c, &ic) in idx.iter().enumerate() {
                cov_out[(a, c)] = cov[(ia, ic)];
            }
        }
        let mut out = GaussianState::from_parts_unchecked(mean_out, cov_out);
        out.symmetrize();
        Ok((y, out))
    }
}
