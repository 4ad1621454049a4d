//! Brute-force numerical verification layer: Wigner functions sampled on
//! uniform grids, direct quadrature of the teleportation output integral,
//! grid convolutions, and overlap-integral fidelities.
//!
//! Everything here uses trapezoidal quadrature on uniform grids and is
//! meant to certify the structure of the closed forms at the 1-2% level,
//! not to compete with them in precision.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::teleport::{channel_mu, Channel, NoiseAmplitudes};

/// Overlap constant for this crate's vacuum-variance-1/4 convention:
/// Tr(rho1 rho2) = pi * integral(W1 W2) per mode. Validated in tests
/// against the closed-form fidelity on vacuum states.
pub const OVERLAP_CONSTANT: f64 = std::f64::consts::PI;

/// A uniform grid axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    /// Symmetric axis [-halfwidth, +halfwidth] with `n` points.
    pub fn symmetric(halfwidth: f64, n: usize) -> Self {
        Self {
            lo: -halfwidth,
            hi: halfwidth,
            n,
        }
    }

    /// Axis centered on `center` spanning +- halfwidth.
    pub fn centered(center: f64, halfwidth: f64, n: usize) -> Self {
        Self {
            lo: center - halfwidth,
            hi: center + halfwidth,
            n,
        }
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step()
    }

    /// Trapezoid weight: 1/2 at the endpoints.
    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n - 1 {
            0.5
        } else {
            1.0
        }
    }

    fn close_to(&self, other: &GridAxis) -> bool {
        self.n == other.n
            && (self.lo - other.lo).abs() < 1e-12
            && (self.hi - other.hi).abs() < 1e-12
    }
}

/// A Wigner function sampled on a uniform grid (2 axes per mode, one or
/// two modes), normalized so the trapezoid integral is 1.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    axes: Vec<GridAxis>,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step()).product()
    }

    /// Trapezoid integral of the stored density.
    pub fn total(&self) -> f64 {
        let mut sum = 0.0;
        self.for_each_cell(|idx, v| {
            let w: f64 = idx
                .iter()
                .zip(&self.axes)
                .map(|(&i, a)| a.weight(i))
                .product();
            sum += w * v;
        });
        sum * self.cell_volume()
    }

    fn normalize(&mut self) {
        let total = self.total();
        for v in &mut self.values {
            *v /= total;
        }
    }

    /// First and second moments of the sampled density.
    pub fn moments(&self) -> (DVector<f64>, DMatrix<f64>) {
        let d = self.axes.len();
        let mut mass = 0.0;
        let mut mean = DVector::zeros(d);
        self.for_each_cell(|idx, v| {
            let w: f64 = idx
                .iter()
                .zip(&self.axes)
                .map(|(&i, a)| a.weight(i))
                .product::<f64>()
                * v;
            mass += w;
            for (k, (&i, a)) in idx.iter().zip(&self.axes).enumerate() {
                mean[k] += w * a.value(i);
            }
        });
        mean /= mass;
        let mut cov = DMatrix::zeros(d, d);
        self.for_each_cell(|idx, v| {
            let w: f64 = idx
                .iter()
                .zip(&self.axes)
                .map(|(&i, a)| a.weight(i))
                .product::<f64>()
                * v;
            for k in 0..d {
                let dk = self.axes[k].value(idx[k]) - mean[k];
                for l in 0..d {
                    let dl = self.axes[l].value(idx[l]) - mean[l];
                    cov[(k, l)] += w * dk * dl;
                }
            }
        });
        cov /= mass;
        (mean, cov)
    }

    /// Marginal density over one axis (integrating out all others),
    /// normalized.
    pub fn marginal(&self, axis: usize) -> Vec<f64> {
        let a = &self.axes[axis];
        let mut out = vec![0.0; a.n];
        self.for_each_cell(|idx, v| {
            let mut w = v;
            for (k, (&i, ax)) in idx.iter().zip(&self.axes).enumerate() {
                if k != axis {
                    w *= ax.weight(i);
                }
            }
            out[idx[axis]] += w;
        });
        let vol: f64 = self
            .axes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != axis)
            .map(|(_, ax)| ax.step())
            .product();
        let norm: f64 = out
            .iter()
            .enumerate()
            .map(|(i, v)| a.weight(i) * v * vol * a.step())
            .sum();
        out.iter().map(|v| v * vol / norm).collect()
    }

    /// L1 distance between two grids on identical axes.
    pub fn l1_distance(&self, other: &WignerGrid) -> Result<f64> {
        self.check_same_axes(other)?;
        let mut sum = 0.0;
        self.for_each_cell(|idx, v| {
            let w: f64 = idx
                .iter()
                .zip(&self.axes)
                .map(|(&i, a)| a.weight(i))
                .product();
            let flat = self.flat_index(idx);
            sum += w * (v - other.values[flat]).abs();
        });
        Ok(sum * self.cell_volume())
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for (i, a) in idx.iter().zip(&self.axes) {
            flat = flat * a.n + i;
        }
        flat
    }

    fn for_each_cell<F: FnMut(&[usize], f64)>(&self, mut f: F) {
        let dims: Vec<usize> = self.axes.iter().map(|a| a.n).collect();
        let mut idx = vec![0usize; dims.len()];
        for &v in &self.values {
            f(&idx, v);
            for k in (0..dims.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn check_same_axes(&self, other: &WignerGrid) -> Result<()> {
        if self.axes.len() != other.axes.len()
            || self
                .axes
                .iter()
                .zip(&other.axes)
                .any(|(a, b)| !a.close_to(b))
        {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// Minimum number of standard deviations a grid axis must cover.
pub const REQUIRED_SIGMA_COVERAGE: f64 = 6.0;

/// Samples the Wigner function of a state (at most two modes) on the given
/// axes. Axes must cover at least six standard deviations around the mean
/// on every quadrature.
pub fn gaussian_to_grid(state: &GaussianState, axes: &[GridAxis]) -> Result<WignerGrid> {
    if state.n_modes() == 0 || state.n_modes() > 2 || axes.len() != 2 * state.n_modes() {
        return Err(Error::BadGridShape(axes.len()));
    }
    for (k, a) in axes.iter().enumerate() {
        let sigma = state.cov()[(k, k)].sqrt();
        let m = state.mean()[k];
        let coverage = ((a.hi - m) / sigma).min((m - a.lo) / sigma);
        if coverage < REQUIRED_SIGMA_COVERAGE {
            return Err(Error::GridRangeTooNarrow {
                lo: a.lo,
                hi: a.hi,
                coverage,
                required: REQUIRED_SIGMA_COVERAGE,
            });
        }
    }

    // precompute the Gaussian once instead of factorizing per point
    let chol = state
        .cov()
        .clone()
        .cholesky()
        .expect("physical covariance is positive definite");
    let inv = chol.inverse();
    let norm =
        (2.0 * std::f64::consts::PI).powi(state.n_modes() as i32) * chol.determinant().sqrt();

    let dims: Vec<usize> = axes.iter().map(|a| a.n).collect();
    let total: usize = dims.iter().product();
    let mut values = Vec::with_capacity(total);
    let d = axes.len();
    let mut idx = vec![0usize; d];
    let mut diff = DVector::zeros(d);
    for _ in 0..total {
        for k in 0..d {
            diff[k] = axes[k].value(idx[k]) - state.mean()[k];
        }
        let quad = (&inv * &diff).dot(&diff);
        values.push((-0.5 * quad).exp() / norm);
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }

    let mut grid = WignerGrid {
        axes: axes.to_vec(),
        values,
    };
    let raw = grid.total();
    if (raw - 1.0).abs() > 1e-2 {
        return Err(Error::QuadratureRange {
            edge: (raw - 1.0).abs(),
            limit: 1e-2,
        });
    }
    grid.normalize();
    Ok(grid)
}

/// Convolves a one-mode grid with the Gaussian channel kernel
/// G_mu(x, p) of per-axis variance mu_i / 2. A channel component narrower
/// than a tenth of the grid step acts as a delta and is skipped; one that
/// the grid cannot resolve (step > sqrt(mu)/4) is an error.
pub fn convolve_with_g_mu(w: &WignerGrid, mu: &Channel) -> Result<WignerGrid> {
    if w.axes.len() != 2 {
        return Err(Error::BadGridShape(w.axes.len()));
    }
    let mut out = w.clone();
    for (axis, mu_i) in [(0usize, mu.mu_x), (1usize, mu.mu_p)] {
        let a = w.axes[axis];
        let sigma = (mu_i / 2.0).sqrt();
        if sigma <= a.step() / 10.0 {
            continue; // kernel narrower than a cell: identity
        }
        if a.step() > mu_i.sqrt() / 4.0 {
            return Err(Error::GridTooCoarse {
                step: a.step(),
                kernel_sigma: sigma,
            });
        }
        out = convolve_axis(&out, axis, sigma);
    }
    out.normalize();
    Ok(out)
}

fn convolve_axis(w: &WignerGrid, axis: usize, sigma: f64) -> WignerGrid {
    let (n0, n1) = (w.axes[0].n, w.axes[1].n);
    let a = w.axes[axis];
    let h = a.step();
    // sampled, renormalized kernel
    let reach = ((4.0 * sigma / h).ceil() as isize).max(1);
    let kernel: Vec<f64> = (-reach..=reach)
        .map(|k| (-0.5 * (k as f64 * h / sigma).powi(2)).exp())
        .collect();
    let ksum: f64 = kernel.iter().sum();

    let mut values = vec![0.0; w.values.len()];
    for i in 0..n0 {
        for j in 0..n1 {
            let src = w.values[i * n1 + j];
            if src == 0.0 {
                continue;
            }
            for (kk, kv) in kernel.iter().enumerate() {
                let offset = kk as isize - reach;
                let (ti, tj) = if axis == 0 {
                    (i as isize + offset, j as isize)
                } else {
                    (i as isize, j as isize + offset)
                };
                if ti >= 0 && ti < n0 as isize && tj >= 0 && tj < n1 as isize {
                    values[ti as usize * n1 + tj as usize] += src * kv / ksum;
                }
            }
        }
    }
    WignerGrid {
        axes: w.axes.clone(),
        values,
    }
}

/// Direct quadrature of the record-averaged teleportation output.
///
/// The output Wigner function is a six-dimensional integral over the
/// pre-measurement phase space and the two measurement records. Because
/// the squeezed-pair covariance, the input state (diagonal covariance
/// required), and the POVM kernels all factorize by quadrature, it splits
/// into an x-chain and a p-chain of three nested integrals each. The
/// record integrals are substituted as x_m = u - delta * t with t on a
/// fixed standardized grid, which keeps the POVM kernel resolved for any
/// delta >= 0 (including exactly zero).
pub fn teleport_integral(
    input: &GaussianState,
    r_2: f64,
    theta_a2: f64,
    deltas: (f64, f64),
    points_per_axis: usize,
    output_axes: Option<(GridAxis, GridAxis)>,
) -> Result<WignerGrid> {
    if input.n_modes() != 1 {
        return Err(Error::NotSingleMode(input.n_modes(), 1));
    }
    let cross = input.cov()[(0, 1)].abs();
    if cross > 1e-12 {
        return Err(Error::NonDiagonalInput(cross));
    }
    if theta_a2 < 1.0 {
        return Err(Error::SubVacuumTheta(theta_a2));
    }
    let n = points_per_axis;

    let (c, s) = (r_2.cosh(), r_2.sinh());
    // squeezed-pair covariance blocks over (mode a2, mode b1)
    let var_a = (c * c * theta_a2 + s * s) / 4.0;
    let var_b = (c * c + s * s * theta_a2) / 4.0;
    let cov_x = -c * s * (theta_a2 + 1.0) / 4.0;
    let cov_p = c * s * (theta_a2 + 1.0) / 4.0;

    // channel moments, used only to choose integration windows
    let noise = NoiseAmplitudes::from_deltas(deltas.0, deltas.1, 1.0)?;
    let mu = channel_mu(r_2, theta_a2, &noise);

    // One quadrature chain. The x chain (flip = +1) is the integral
    //   f(X) = int dq1 dqb dxm K(u - xm) W_in(q1) W_sq(X - sqrt(2) xm, qb)
    // with u = (q1 + qb)/sqrt(2); the p chain (flip = -1) has
    // u = (qb - q1)/sqrt(2) and output argument P + sqrt(2) pm. Two
    // unit-Jacobian substitutions keep every sampled feature resolved for
    // any POVM width and squeezing:
    //   - records are standardized, xm = u - delta t;
    //   - the squeezed pair combination u' = qa + flip*qb replaces q1
    //     (q1 = q_out - u' + flip sqrt(2) delta t).
    // The qb sum then only sees the wide conditional direction of the
    // squeezed Gaussian, and the narrow direction is gridded directly.
    let chain = |in_mean: f64,
                 in_var: f64,
                 cov_ab: f64,
                 delta: f64,
                 flip: f64,
                 out_axis: GridAxis|
     -> Vec<f64> {
        // 2-D Gaussian over (a2 quadrature, b1 quadrature)
        let det = var_a * var_b - cov_ab * cov_ab;
        let (ia, ib, iab) = (var_b / det, var_a / det, -cov_ab / det);
        let wsq =
            |qa: f64, qb: f64| (-0.5 * (ia * qa * qa + 2.0 * iab * qa * qb + ib * qb * qb)).exp();
        let sigma_u = (var_a + var_b + 2.0 * flip * cov_ab).sqrt();
        let u_axis = GridAxis::symmetric(7.0 * sigma_u, n);
        let qb_axis = GridAxis::symmetric(7.0 * var_b.sqrt(), n);
        let t_axis = GridAxis::symmetric(7.0, n);

        // marginal of the squeezed pair over its wide coordinate
        let m_u: Vec<f64> = (0..n)
            .map(|iu| {
                let u = u_axis.value(iu);
                let mut acc = 0.0;
                for jb in 0..n {
                    let qb = qb_axis.value(jb);
                    acc += qb_axis.weight(jb) * wsq(u - flip * qb, qb);
                }
                acc * u_axis.weight(iu)
            })
            .collect();
        let tker: Vec<f64> = (0..n)
            .map(|i| {
                let t = t_axis.value(i);
                (-0.5 * t * t).exp() * t_axis.weight(i)
            })
            .collect();

        let mut out = vec![0.0; out_axis.n];
        for (oi, o) in out.iter_mut().enumerate() {
            let q_out = out_axis.value(oi);
            let mut acc = 0.0;
            for (iu, &wu) in m_u.iter().enumerate() {
                if wu == 0.0 {
                    continue;
                }
                let u = u_axis.value(iu);
                let mut inner = 0.0;
                for (it, &wt) in tker.iter().enumerate() {
                    let t = t_axis.value(it);
                    let q1 = q_out - u + flip * std::f64::consts::SQRT_2 * delta * t;
                    let d = q1 - in_mean;
                    inner += wt * (-0.5 * d * d / in_var).exp();
                }
                acc += wu * inner;
            }
            *o = acc;
        }
        out
    };

    let in_mean = (input.mean()[0], input.mean()[1]);
    let in_var = (input.cov()[(0, 0)], input.cov()[(1, 1)]);
    let (ax_x, ax_p) = match output_axes {
        Some(axes) => axes,
        None => {
            let half_x = (7.5 * (in_var.0 + mu.mu_x / 2.0).sqrt()).max(8.0);
            let half_p = (7.5 * (in_var.1 + mu.mu_p / 2.0).sqrt()).max(8.0);
            (
                GridAxis::centered(in_mean.0, half_x, n),
                GridAxis::centered(in_mean.1, half_p, n),
            )
        }
    };

    let fx = chain(in_mean.0, in_var.0, cov_x, deltas.0, 1.0, ax_x);
    let fp = chain(in_mean.1, in_var.1, cov_p, deltas.1, -1.0, ax_p);

    for f in [&fx, &fp] {
        let peak = f.iter().cloned().fold(0.0, f64::max);
        let edge = f[0].max(*f.last().unwrap());
        if edge > 1e-6 * peak {
            return Err(Error::QuadratureRange {
                edge: edge / peak,
                limit: 1e-6,
            });
        }
    }

    let mut values = Vec::with_capacity(ax_x.n * ax_p.n);
    for vx in &fx {
        for vp in &fp {
            values.push(vx * vp);
        }
    }
    let mut grid = WignerGrid {
        axes: vec![ax_x, ax_p],
        values,
    };
    grid.normalize();
    Ok(grid)
}

/// Fidelity from the phase-space overlap integral,
/// F = pi * integral(W1 W2), valid when at least one state is pure. Purity
/// is estimated from the grid moments and must reach 0.98 for one of the
/// arguments.
pub fn overlap_fidelity(w1: &WignerGrid, w2: &WignerGrid) -> Result<f64> {
    w1.check_same_axes(w2)?;
    if w1.axes.len() != 2 {
        return Err(Error::BadGridShape(w1.axes.len()));
    }
    let purity = |w: &WignerGrid| {
        let (_, cov) = w.moments();
        1.0 / (4.0 * (cov[(0, 0)] * cov[(1, 1)] - cov[(0, 1)] * cov[(1, 0)]).sqrt())
    };
    let best = purity(w1).max(purity(w2));
    if best < 0.98 {
        return Err(Error::OverlapNeedsPureState(best));
    }
    let mut sum = 0.0;
    w1.for_each_cell(|idx, v| {
        let w: f64 = idx
            .iter()
            .zip(&w1.axes)
            .map(|(&i, a)| a.weight(i))
            .product();
        sum += w * v * w2.values[w1.flat_index(idx)];
    });
    Ok(OVERLAP_CONSTANT * sum * w1.cell_volume())
}
