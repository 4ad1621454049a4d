//! Uhlmann fidelity for single-mode Gaussian states.

use super::GaussianState;
use crate::error::{Error, Result};

/// Uhlmann fidelity F = (Tr sqrt(sqrt(rho_a) rho_b sqrt(rho_a)))^2 for two
/// single-mode Gaussian states.
///
/// In the vacuum-variance-1/4 convention, with covariance matrices V_a and
/// V_b and mean difference d:
///
///   F = 2 exp(-d^T (V_a + V_b)^{-1} d / 2) / (sqrt(D + L) - sqrt(L)),
///   D = 16 det(V_a + V_b),
///   L = (16 det V_a - 1)(16 det V_b - 1).
pub fn gaussian_fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.n_modes() != 1 || b.n_modes() != 1 {
        return Err(Error::NotSingleMode(a.n_modes(), b.n_modes()));
    }
    for s in [a, b] {
        let min_eig = s.min_symplectic_eigenvalue();
        if min_eig < 0.25 - super::PHYSICALITY_SLACK {
            return Err(Error::UnphysicalState(min_eig));
        }
    }

    let vsum = a.cov() + b.cov();
    let det_sum = det2(&vsum);
    let big_delta = 16.0 * det_sum;
    // negative only through rounding on pure states; clamp at zero
    let lambda = ((16.0 * det2(a.cov()) - 1.0) * (16.0 * det2(b.cov()) - 1.0)).max(0.0);

    let d = (a.mean() - b.mean()).clone_owned();
    // (V_a + V_b)^{-1} via the 2x2 adjugate
    let quad = (vsum[(1, 1)] * d[0] * d[0] - 2.0 * vsum[(0, 1)] * d[0] * d[1]
        + vsum[(0, 0)] * d[1] * d[1])
        / det_sum;

    let f = 2.0 * (-0.5 * quad).exp() / ((big_delta + lambda).sqrt() - lambda.sqrt());
    Ok(f.clamp(0.0, 1.0))
}

fn det2(m: &nalgebra::DMatrix<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}
