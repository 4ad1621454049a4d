//! The teleportation channel in closed form, critical-parameter analysis,
//! figure sweeps, and the end-to-end pipeline executor.
//!
//! The protocol teleports the state of nanomechanical mode a1 onto the
//! distant mode a2: two-mode squeezing entangles (a2, b2), two swaps relay
//! the entangled partner through the transmission line onto b1, a 50-50
//! beam splitter mixes (a1, b1), noisy homodyne detectors read x on one
//! output port and p on the other, and the records are fed forward as a
//! displacement of a2.
//!
//! Averaged over records the channel is Gaussian: the output state is the
//! input convolved with a Gaussian of widths
//!
//!   mu_i = 4 delta_i^2 + (1 + Theta_a2) e^{-2 r_2} / 2,   i = x, p
//!
//! (variance mu_i/2 per quadrature in this crate's convention).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::circuit::{check_hierarchy, schedule, DerivedCircuit, DeviceParams, DEFAULT_MARGIN};
use crate::consts::{H_PLANCK, K_BOLTZMANN};
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_fidelity, GaussianState, Quadrature};
use crate::numeric::bisect;

/// Feedforward gains applied to the (x, p) measurement records. The
/// magnitude is sqrt(2); the relative sign is pinned by requiring the
/// pipeline to reproduce the closed-form channel.
pub const FEEDFORWARD_GAIN_X: f64 = std::f64::consts::SQRT_2;
pub const FEEDFORWARD_GAIN_P: f64 = -std::f64::consts::SQRT_2;

/// Gaussian channel noise pair (mu_x, mu_p); the record-averaged output
/// state is the input convolved with a Gaussian of these widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub mu_x: f64,
    pub mu_p: f64,
}

/// Dimensionless homodyne POVM widths and the device constants c_i with
/// delta_i = c_i / sqrt(tau_m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseAmplitudes {
    pub delta_x: f64,
    pub delta_p: f64,
    pub c_x: f64,
    pub c_p: f64,
}

impl NoiseAmplitudes {
    /// Noiseless detectors.
    pub fn zero() -> Self {
        Self {
            delta_x: 0.0,
            delta_p: 0.0,
            c_x: 0.0,
            c_p: 0.0,
        }
    }

    /// From POVM widths measured at integration time `tau_m`.
    pub fn from_deltas(delta_x: f64, delta_p: f64, tau_m: f64) -> Result<Self> {
        if delta_x < 0.0 || delta_p < 0.0 {
            return Err(Error::NegativeNoise(delta_x.min(delta_p)));
        }
        if tau_m <= 0.0 {
            return Err(Error::NonpositiveMeasurementTime(tau_m));
        }
        Ok(Self {
            delta_x,
            delta_p,
            c_x: delta_x * tau_m.sqrt(),
            c_p: delta_p * tau_m.sqrt(),
        })
    }

    /// From device constants, evaluated at integration time `tau_m`.
    pub fn from_constants(c_x: f64, c_p: f64, tau_m: f64) -> Result<Self> {
        if c_x < 0.0 || c_p < 0.0 {
            return Err(Error::NegativeNoise(c_x.min(c_p)));
        }
        if tau_m <= 0.0 {
            return Err(Error::NonpositiveMeasurementTime(tau_m));
        }
        Ok(Self {
            delta_x: c_x / tau_m.sqrt(),
            delta_p: c_p / tau_m.sqrt(),
            c_x,
            c_p,
        })
    }
}

/// Protocol environment: temperature, thermal indices, squeezing, and
/// measurement time. `eta = (1 + Theta_a2) e^{-2 r_2} / 2` summarizes the
/// squeezing-vs-temperature interplay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpec {
    pub temperature: f64,
    pub theta_a1: f64,
    pub theta_a2: f64,
    pub r_2: f64,
    pub tau_m: f64,
    pub eta: f64,
}

impl EnvSpec {
    pub fn new(
        temperature: f64,
        theta_a1: f64,
        theta_a2: f64,
        r_2: f64,
        tau_m: f64,
    ) -> Result<Self> {
        if theta_a1 < 1.0 {
            return Err(Error::SubVacuumTheta(theta_a1));
        }
        if theta_a2 < 1.0 {
            return Err(Error::SubVacuumTheta(theta_a2));
        }
        if tau_m <= 0.0 {
            return Err(Error::NonpositiveMeasurementTime(tau_m));
        }
        Ok(Self {
            temperature,
            theta_a1,
            theta_a2,
            r_2,
            tau_m,
            eta: eta_index(theta_a2, r_2),
        })
    }

    /// Environment at a device's operating temperature: Theta_a2 follows
    /// from the mechanical frequency, the input is coherent (Theta_a1 = 1)
    /// unless overridden.
    pub fn from_device(
        device: &DeviceParams,
        r_2: f64,
        tau_m: f64,
        theta_a1: Option<f64>,
    ) -> Result<Self> {
        let theta_a2 = theta_of(device.omega_nr, device.temperature);
        Self::new(
            device.temperature,
            theta_a1.unwrap_or(1.0),
            theta_a2,
            r_2,
            tau_m,
        )
    }
}

/// eta = (1 + Theta) e^{-2 r} / 2.
pub fn eta_index(theta_a2: f64, r_2: f64) -> f64 {
    0.5 * (1.0 + theta_a2) * (-2.0 * r_2).exp()
}

/// Thermal index Theta = coth(h nu / 2 k_B T) of a mode at ordinary
/// frequency `omega` (Hz) and temperature `t` (K). Equals 1 at T = 0 and
/// grows as 2 k_B T / (h nu) at high temperature.
pub fn theta_of(omega: f64, t: f64) -> f64 {
    assert!(omega > 0.0, "mode frequency must be positive");
    assert!(t >= 0.0, "temperature must be nonnegative");
    if t == 0.0 {
        return 1.0;
    }
    let x = H_PLANCK * omega / (2.0 * K_BOLTZMANN * t);
    1.0 / x.tanh()
}

/// Channel noise: mu_i = 4 delta_i^2 + (1 + Theta_a2) e^{-2 r_2} / 2.
pub fn channel_mu(r_2: f64, theta_a2: f64, noise: &NoiseAmplitudes) -> Channel {
    let eta = eta_index(theta_a2, r_2);
    Channel {
        mu_x: 4.0 * noise.delta_x * noise.delta_x + eta,
        mu_p: 4.0 * noise.delta_p * noise.delta_p + eta,
    }
}

/// Closed-form fidelity for teleporting a displaced thermal state of index
/// `theta_a1` through the channel:
///
///   F = 2 / (sqrt((1 + 2 T s_x)(1 + 2 T s_p)) - sqrt((4 s_x s_p - 1)(T^2 - 1)))
///
/// with s_i = mu_i + theta_a1 / 2. Independent of the input displacement.
pub fn fidelity_closed_form(ch: &Channel, theta_a1: f64) -> f64 {
    assert!(theta_a1 >= 1.0, "thermal index below vacuum");
    assert!(ch.mu_x >= 0.0 && ch.mu_p >= 0.0, "negative channel noise");
    let sx = ch.mu_x + theta_a1 / 2.0;
    let sp = ch.mu_p + theta_a1 / 2.0;
    let term1 = (1.0 + 2.0 * theta_a1 * sx) * (1.0 + 2.0 * theta_a1 * sp);
    let term2 = (4.0 * sx * sp - 1.0) * (theta_a1 * theta_a1 - 1.0);
    debug_assert!(term1 >= 0.0 && term2 >= 0.0, "discriminant went negative");
    2.0 / (term1.sqrt() - term2.sqrt())
}

/// Critical noise index: the largest eta at which a coherent state is
/// still teleported with F > 1/2 at measurement time `tau_m`, given the
/// detector constants (c_x, c_p). Zero when even a noiseless channel
/// (eta = 0) cannot beat the classical limit.
pub fn eta_critical(tau_m: f64, noise_constants: (f64, f64)) -> f64 {
    assert!(tau_m > 0.0, "measurement time must be positive");
    let (c_x, c_p) = noise_constants;
    let f_of = |eta: f64| {
        let ch = Channel {
            mu_x: 4.0 * c_x * c_x / tau_m + eta,
            mu_p: 4.0 * c_p * c_p / tau_m + eta,
        };
        fidelity_closed_form(&ch, 1.0) - 0.5
    };
    if f_of(0.0) <= 0.0 {
        return 0.0;
    }
    // F(eta = 10) <= 1/11 < 1/2, so [0, 10] always brackets the root.
    const ETA_HI: f64 = 10.0;
    bisect(0.0, ETA_HI, f_of, 1e-10, 0.0)
}

/// Critical measurement time: the root of
/// (1 + 4 c_x^2 / tau)(1 + 4 c_p^2 / tau) = 4. Below it the detector noise
/// alone pushes the coherent-state fidelity under 1/2 at any squeezing.
pub fn tau_critical(noise_constants: (f64, f64)) -> f64 {
    let (c_x, c_p) = noise_constants;
    if c_x == 0.0 && c_p == 0.0 {
        return 0.0;
    }
    let a = 4.0 * c_x * c_x;
    let b = 4.0 * c_p * c_p;
    let g = |tau: f64| (1.0 + a / tau) * (1.0 + b / tau) - 4.0;
    bisect(1e-30, 1e3, g, 0.0, 1e-12)
}

/// Result of one pipeline execution.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    /// Record-averaged analytic output state of mode a2 (one mode).
    pub output: GaussianState,
    /// Closed-form fidelity from the channel formula.
    pub f_closed: f64,
    /// Monte-Carlo fidelity from sampled measurement records.
    pub f_mc: f64,
    /// Batch-estimate of the Monte-Carlo standard error on `f_mc`.
    pub f_mc_sigma: f64,
    /// The channel the run realizes.
    pub channel: Channel,
    /// Schedule or hierarchy findings; never fatal.
    pub warnings: Vec<String>,
}

/// Runs the five-mode protocol end to end.
///
/// The analytic path propagates means and covariances exactly and averages
/// over records in closed form; it is the authoritative result. The
/// Monte-Carlo path samples `mc_samples` record pairs through the noisy
/// homodyne conditioning and rebuilds the averaged output state from the
/// scatter of feedforward displacements; it cross-checks the analytic path.
pub fn run_pipeline(
    d: &DerivedCircuit,
    device: Option<&DeviceParams>,
    env: &EnvSpec,
    noise: &NoiseAmplitudes,
    input_mean: (f64, f64),
    seed: u64,
    mc_samples: usize,
) -> Result<PipelineOutcome> {
    assert!(mc_samples >= 10, "need at least 10 Monte-Carlo samples");
    let mut warnings = Vec::new();
    match schedule(d, env.r_2, env.tau_m) {
        Ok(_) => {}
        Err(e) => warnings.push(format!("schedule invalid: {e}")),
    }
    if let Some(p) = device {
        let report = check_hierarchy(d, p, env.tau_m, DEFAULT_MARGIN);
        for c in report.failures() {
            warnings.push(format!(
                "hierarchy violated: {} ({:.3e} vs {:.3e}, ratio {:.3})",
                c.name, c.lhs, c.rhs, c.ratio
            ));
        }
    }

    let input = GaussianState::thermal(env.theta_a1)?.displace(0, input_mean.0, input_mean.1)?;

    // a1, b1, b2, c_r, a2
    let full = input
        .tensor(&GaussianState::vacuum(3))
        .tensor(&GaussianState::thermal(env.theta_a2)?);
    let pre = full
        .two_mode_squeeze(4, 2, env.r_2)?
        .beam_splitter(2, 3, std::f64::consts::FRAC_PI_2)?
        .beam_splitter(3, 1, std::f64::consts::FRAC_PI_2)?
        .beam_splitter(0, 1, std::f64::consts::FRAC_PI_4)?;

    // Records: z_x = x(a1 port) + detector noise, z_p = p(b1 port) + noise;
    // output quadratures: x_a2 + g_x z_x, p_a2 + g_p z_p.
    let (gx, gp) = (FEEDFORWARD_GAIN_X, FEEDFORWARD_GAIN_P);
    let (ux, vp) = (0, 3); // x of mode a1, p of mode b1
    let (ax, ap) = (8, 9); // quadratures of mode a2
    let m = pre.mean();
    let v = pre.cov();
    let dx2 = noise.delta_x * noise.delta_x;
    let dp2 = noise.delta_p * noise.delta_p;
    let mean_out = nalgebra::DVector::from_row_slice(&[m[ax] + gx * m[ux], m[ap] + gp * m[vp]]);
    let mut cov_out = nalgebra::DMatrix::zeros(2, 2);
    cov_out[(0, 0)] = v[(ax, ax)] + gx * gx * (v[(ux, ux)] + dx2) + 2.0 * gx * v[(ax, ux)];
    cov_out[(1, 1)] = v[(ap, ap)] + gp * gp * (v[(vp, vp)] + dp2) + 2.0 * gp * v[(ap, vp)];
    let off = v[(ax, ap)] + gx * v[(ux, ap)] + gp * v[(ax, vp)] + gx * gp * v[(ux, vp)];
    cov_out[(0, 1)] = off;
    cov_out[(1, 0)] = off;
    let output = GaussianState::from_parts(mean_out, cov_out)?;

    let channel = channel_mu(env.r_2, env.theta_a2, noise);
    let f_closed = fidelity_closed_form(&channel, env.theta_a1);

    // Monte-Carlo record averaging: sample records through the noisy
    // homodyne conditioning, displace a2 by the feedforward, and rebuild
    // the averaged state from the scatter of conditioned means (the
    // conditioned covariance is record-independent).
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(mc_samples);
    let mut cond_cov = None;
    for _ in 0..mc_samples {
        let (rec_x, after_x) =
            pre.homodyne_measure(0, Quadrature::X, noise.delta_x, None, &mut rng)?;
        let (rec_p, after_p) =
            after_x.homodyne_measure(0, Quadrature::P, noise.delta_p, None, &mut rng)?;
        let displaced = after_p.displace(2, gx * rec_x, gp * rec_p)?;
        means.push(displaced.mode_mean(2)?);
        if cond_cov.is_none() {
            cond_cov = Some(displaced.partial_trace(&[2])?.cov().clone());
        }
    }
    let cond_cov = cond_cov.expect("at least one sample");

    let mixture_fidelity = |chunk: &[(f64, f64)]| -> Result<f64> {
        let n = chunk.len() as f64;
        let (mut sx, mut sp) = (0.0, 0.0);
        for (x, p) in chunk {
            sx += x;
            sp += p;
        }
        let (mx, mp) = (sx / n, sp / n);
        let (mut vxx, mut vpp, mut vxp) = (0.0, 0.0, 0.0);
        for (x, p) in chunk {
            vxx += (x - mx) * (x - mx);
            vpp += (p - mp) * (p - mp);
            vxp += (x - mx) * (p - mp);
        }
        let mut cov = cond_cov.clone();
        cov[(0, 0)] += vxx / n;
        cov[(1, 1)] += vpp / n;
        cov[(0, 1)] += vxp / n;
        cov[(1, 0)] += vxp / n;
        let avg = GaussianState::from_parts(nalgebra::DVector::from_row_slice(&[mx, mp]), cov)?;
        gaussian_fidelity(&input, &avg)
    };

    let f_mc = mixture_fidelity(&means)?;
    let n_batches = 10.min(mc_samples);
    let batch = mc_samples / n_batches;
    let mut batch_f = Vec::with_capacity(n_batches);
    for b in 0..n_batches {
        batch_f.push(mixture_fidelity(&means[b * batch..(b + 1) * batch])?);
    }
    let bmean = batch_f.iter().sum::<f64>() / n_batches as f64;
    let bvar = batch_f
        .iter()
        .map(|f| (f - bmean) * (f - bmean))
        .sum::<f64>()
        / (n_batches as f64 - 1.0);
    let f_mc_sigma = (bvar / n_batches as f64).sqrt();

    Ok(PipelineOutcome {
        output,
        f_closed,
        f_mc,
        f_mc_sigma,
        channel,
        warnings,
    })
}

/// Critical-curve sweep: eta_c over a grid of measurement times, plus the
/// coherent-state fidelity at fixed eta values (inset data).
#[derive(Debug, Clone)]
pub struct Fig2Sweep {
    /// (tau_m, eta_c) rows.
    pub main: Vec<(f64, f64)>,
    pub eta_values: Vec<f64>,
    /// (tau_m, F at each eta) rows.
    pub inset: Vec<(f64, Vec<f64>)>,
}

pub fn sweep_fig2(
    noise_constants: (f64, f64),
    tau_grid: &[f64],
    eta_values: &[f64],
) -> Result<Fig2Sweep> {
    if tau_grid.is_empty() {
        return Err(Error::EmptySweep);
    }
    let (c_x, c_p) = noise_constants;
    let main = tau_grid
        .iter()
        .map(|&tau| (tau, eta_critical(tau, noise_constants)))
        .collect();
    let inset = tau_grid
        .iter()
        .map(|&tau| {
            let fs = eta_values
                .iter()
                .map(|&eta| {
                    let ch = Channel {
                        mu_x: 4.0 * c_x * c_x / tau + eta,
                        mu_p: 4.0 * c_p * c_p / tau + eta,
                    };
                    fidelity_closed_form(&ch, 1.0)
                })
                .collect();
            (tau, fs)
        })
        .collect();
    Ok(Fig2Sweep {
        main,
        eta_values: eta_values.to_vec(),
        inset,
    })
}

/// Finite-temperature sweep: fidelity versus the common thermal index
/// Theta_a1 = Theta_a2 = Theta, one column per squeezing parameter.
#[derive(Debug, Clone)]
pub struct Fig3Sweep {
    pub r2_values: Vec<f64>,
    /// (Theta, F at each r_2) rows.
    pub rows: Vec<(f64, Vec<f64>)>,
}

pub fn sweep_fig3(
    noise_constants: (f64, f64),
    tau_m: f64,
    r2_values: &[f64],
    theta_grid: &[f64],
) -> Result<Fig3Sweep> {
    if theta_grid.is_empty() || r2_values.is_empty() {
        return Err(Error::EmptySweep);
    }
    let noise = NoiseAmplitudes::from_constants(noise_constants.0, noise_constants.1, tau_m)?;
    let rows = theta_grid
        .iter()
        .map(|&theta| {
            let fs = r2_values
                .iter()
                .map(|&r2| fidelity_closed_form(&channel_mu(r2, theta, &noise), theta))
                .collect();
            (theta, fs)
        })
        .collect();
    Ok(Fig3Sweep {
        r2_values: r2_values.to_vec(),
        rows,
    })
}
