//! Multimode Gaussian states and the exact Gaussian operations used by the
//! teleportation protocol.
//!
//! Conventions, fixed once for the whole crate:
//! - quadrature ordering is (x1, p1, ..., xN, pN), dimensionless;
//! - the vacuum has covariance (1/4)·I, i.e. x = (a + a†)/2;
//! - a thermal mode with index Theta has covariance (Theta/4)·I;
//! - physicality means every symplectic eigenvalue of the covariance is
//!   >= 1/4.
//!
//! States are immutable values; every operation returns a new state and
//! re-symmetrizes the covariance to suppress floating-point drift.

mod fidelity;
mod measure;
mod symplectic;

pub use fidelity::gaussian_fidelity;
pub use measure::Quadrature;
pub use symplectic::SymplecticOp;

use nalgebra::{DMatrix, DVector};

use crate::consts::VACUUM_VARIANCE;
use crate::error::{Error, Result};

/// Absolute symmetry tolerance for accepting an externally supplied
/// covariance matrix (entries are O(1) in the dimensionless convention).
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Slack below 1/4 allowed for the minimum symplectic eigenvalue before a
/// state is rejected as unphysical.
pub const PHYSICALITY_SLACK: f64 = 1e-9;

/// A multimode Gaussian state: mean quadrature vector plus covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Vacuum of `n_modes` modes: zero mean, covariance (1/4)·I.
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            n_modes,
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
        }
    }

    /// Single-mode thermal state with dimensionless index `theta` >= 1:
    /// zero mean, covariance (theta/4)·I. `theta = 1` is the vacuum.
    pub fn thermal(theta: f64) -> Result<Self> {
        if theta < 1.0 || theta.is_nan() {
            return Err(Error::SubVacuumTheta(theta));
        }
        Ok(Self {
            n_modes: 1,
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (theta / 4.0),
        })
    }

    /// Single-mode coherent state: vacuum displaced to mean (x, p).
    pub fn coherent(x: f64, p: f64) -> Self {
        let mut s = Self::vacuum(1);
        s.mean[0] = x;
        s.mean[1] = p;
        s
    }

    /// Builds a state from explicit moments, validating symmetry and the
    /// uncertainty principle.
    pub fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if !dim.is_multiple_of(2) || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::CovarianceShape {
                expected: dim,
                rows: cov.nrows(),
                cols: cov.ncols(),
            });
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::AsymmetricCovariance(asym));
        }
        let state = Self {
            n_modes: dim / 2,
            mean,
            cov,
        };
        let min_eig = state.min_symplectic_eigenvalue();
        if min_eig < VACUUM_VARIANCE - PHYSICALITY_SLACK {
            return Err(Error::UnphysicalState(min_eig));
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean (x, p) of one mode.
    pub fn mode_mean(&self, mode: usize) -> Result<(f64, f64)> {
        self.check_mode(mode)?;
        Ok((self.mean[2 * mode], self.mean[2 * mode + 1]))
    }

    /// (Var x, Var p) of one mode.
    pub fn mode_variances(&self, mode: usize) -> Result<(f64, f64)> {
        self.check_mode(mode)?;
        Ok((
            self.cov[(2 * mode, 2 * mode)],
            self.cov[(2 * mode + 1, 2 * mode + 1)],
        ))
    }

    /// Tensor product: block direct sum of covariances, concatenated means.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.n_modes + other.n_modes;
        let (da, db) = (2 * self.n_modes, 2 * other.n_modes);
        let mut mean = DVector::zeros(2 * n);
        mean.rows_mut(0, da).copy_from(&self.mean);
        mean.rows_mut(da, db).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        cov.view_mut((0, 0), (da, da)).copy_from(&self.cov);
        cov.view_mut((da, da), (db, db)).copy_from(&other.cov);
        Self {
            n_modes: n,
            mean,
            cov,
        }
    }

    /// Reduced state over `keep` modes (rows/columns selection). The kept
    /// modes appear in the order listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::BadKeepList);
        }
        let mut seen = vec![false; self.n_modes];
        for &m in keep {
            self.check_mode(m)?;
            if seen[m] {
                return Err(Error::BadKeepList);
            }
            seen[m] = true;
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let dim = idx.len();
        let mut mean = DVector::zeros(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        for (a, &ia) in idx.iter().enumerate() {
            mean[a] = self.mean[ia];
            for (b, &ib) in idx.iter().enumerate() {
                cov[(a, b)] = self.cov[(ia, ib)];
            }
        }
        Ok(Self {
            n_modes: keep.len(),
            mean,
            cov,
        })
    }

    /// Wigner density at a phase-space point (length 2N), normalized so the
    /// full phase-space integral is 1.
    pub fn wigner_density(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), 2 * self.n_modes, "point dimension mismatch");
        let d = DVector::from_row_slice(point) - &self.mean;
        let chol = self
            .cov
            .clone()
            .cholesky()
            .expect("physical covariance is positive definite");
        let quad = d.dot(&chol.solve(&d));
        let det = chol.determinant();
        let norm = (2.0 * std::f64::consts::PI).powi(self.n_modes as i32) * det.sqrt();
        (-0.5 * quad).exp() / norm
    }

    /// Symplectic eigenvalues (moduli of the eigenvalues of Omega·V, one per
    /// mode, ascending). All >= 1/4 for a physical state.
    ///
    /// Computed through symmetric eigenproblems only: Omega·V is similar to
    /// the antisymmetric K = V^{1/2} Omega V^{1/2}, and K·K^T = -K^2 is
    /// symmetric positive semidefinite with each nu^2 doubled. (A
    /// nonsymmetric Schur iteration on Omega·V can stall on its purely
    /// imaginary spectrum.)
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        if self.n_modes == 0 {
            return Vec::new();
        }
        let se = self.cov.clone().symmetric_eigen();
        if se.eigenvalues.iter().any(|&v| v <= 0.0) {
            // not a covariance matrix at all
            return vec![f64::NEG_INFINITY; self.n_modes];
        }
        let sqrt_d = DMatrix::from_diagonal(&se.eigenvalues.map(f64::sqrt));
        let v_half = &se.eigenvectors * sqrt_d * se.eigenvectors.transpose();
        let k = &v_half * symplectic_form(self.n_modes) * v_half;
        let squares = (&k * k.transpose()).symmetric_eigen().eigenvalues;
        let mut nus: Vec<f64> = squares.iter().map(|v| v.max(0.0).sqrt()).collect();
        nus.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // nu^2 values come doubled; keep one of each
        nus.into_iter().step_by(2).collect()
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Purity Tr(rho^2) = 1 / (4^N sqrt(det V)).
    pub fn purity(&self) -> f64 {
        let det = self.cov.clone().lu().determinant();
        1.0 / (4.0_f64.powi(self.n_modes as i32) * det.sqrt())
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        let n_modes = mean.len() / 2;
        Self { n_modes, mean, cov }
    }

    pub(crate) fn symmetrize(&mut self) {
        let t = self.cov.transpose();
        self.cov = (&self.cov + t) * 0.5;
    }
}

/// Block-diagonal symplectic form: one [[0, 1], [-1, 0]] block per mode in
/// the (x, p) ordering.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}
