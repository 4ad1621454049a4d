//! Single-electron-transistor mixer readout model: Bessel-demodulated
//! current response, shot-noise-limited displacement and momentum
//! sensitivities, and their conversion to dimensionless homodyne POVM
//! widths.

use crate::bessel::{bessel_j0, bessel_j1};
use crate::circuit::DerivedCircuit;
use crate::consts::{E_CHARGE, H_PLANCK};
use crate::error::{Error, Result};
use crate::teleport::NoiseAmplitudes;

/// SET mixer parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    /// Current response amplitude, A.
    pub i_0: f64,
    /// Gate drive modulation index (2 pi / e) Q_ac, dimensionless.
    pub alpha_g: f64,
    /// Charge sensitivity, e / sqrt(Hz).
    pub sqrt_s_q: f64,
    /// Resonator-SET coupling capacitance during readout, F.
    pub c_x_d: f64,
    /// Readout bias voltage, V.
    pub v_x_d: f64,
    /// Normalized coupling distance, m.
    pub d_1: f64,
    /// Capacitance coupling the phase-mode charge to the SET, F.
    pub c_p_d: f64,
    /// O(1) numerical factor of the homodyne sensitivity formulas.
    pub beta_hd: f64,
    /// Detector bandwidth, Hz; must stay below 2 omega_nr so only the
    /// static component of the mixed-down current is detected.
    pub bandwidth: f64,
}

impl DetectorSpec {
    /// Reference readout parameters: 1e-6 e/rtHz charge sensitivity,
    /// 0.5 fF / 10 V / 100 nm displacement transducer, 1 fF charge tap,
    /// gate drive at the J1-maximizing index 1.9.
    pub fn reference() -> Self {
        DetectorSpec {
            i_0: 1e-9,
            alpha_g: 1.9,
            sqrt_s_q: 1e-6,
            c_x_d: 0.5e-15,
            v_x_d: 10.0,
            d_1: 100e-9,
            c_p_d: 1e-15,
            beta_hd: 1.0,
            bandwidth: 1.5e9,
        }
    }

    /// Signal modulation index per unit physical displacement,
    /// alpha_x = (2 pi / (e d_1)) C_x^d V_x^d, in 1/m.
    pub fn alpha_x(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.c_x_d * self.v_x_d / (E_CHARGE * self.d_1)
    }

    /// Checks the parameter invariants against the mechanical frequency.
    pub fn validate(&self, omega_nr: f64) -> Result<()> {
        if self.alpha_g <= 0.0 || self.alpha_g > 12.0 {
            return Err(Error::InvalidDevice(format!(
                "alpha_g must be in (0, 12] (series domain of the Bessel demodulation), got {}",
                self.alpha_g
            )));
        }
        for (name, v) in [
            ("i_0", self.i_0),
            ("sqrt_s_q", self.sqrt_s_q),
            ("c_x_d", self.c_x_d),
            ("v_x_d", self.v_x_d),
            ("d_1", self.d_1),
            ("c_p_d", self.c_p_d),
            ("beta_hd", self.beta_hd),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidDevice(format!(
                    "detector parameter {name} must be positive, got {v:e}"
                )));
            }
        }
        if self.bandwidth >= 2.0 * omega_nr {
            return Err(Error::InvalidDevice(format!(
                "bandwidth {:.3e} Hz must stay below 2 omega_nr = {:.3e} Hz",
                self.bandwidth,
                2.0 * omega_nr
            )));
        }
        Ok(())
    }
}

/// Static (DC) component of the demodulated SET current,
/// I_0 J_0(alpha_g) - I_0 J_1(alpha_g) * (alpha_x x_i), linear in the
/// measured quadrature. `signal` is the dimensionless product alpha_x * x_i.
pub fn demodulated_current(spec: &DetectorSpec, signal: f64) -> f64 {
    spec.i_0 * (bessel_j0(spec.alpha_g) - bessel_j1(spec.alpha_g) * signal)
}

/// The linearized response holds for |alpha_x x_i| well below alpha_g.
pub fn linearization_valid(spec: &DetectorSpec, signal: f64) -> bool {
    signal.abs() <= 0.1 * spec.alpha_g
}

/// Shot-noise-limited displacement sensitivity
/// sqrt(S_x) = beta_hd sqrt(S_q) d_1 / (C_x^d V_x^d), in m / sqrt(Hz).
pub fn displacement_sensitivity(spec: &DetectorSpec) -> f64 {
    spec.beta_hd * (spec.sqrt_s_q * E_CHARGE) * spec.d_1 / (spec.c_x_d * spec.v_x_d)
}

/// Shot-noise-limited momentum (charge) sensitivity
/// sqrt(S_p) = beta_hd sqrt(S_q) C_Sigma / C_p^d, in e / sqrt(Hz).
pub fn momentum_sensitivity(spec: &DetectorSpec, c_sigma: f64) -> f64 {
    spec.beta_hd * spec.sqrt_s_q * c_sigma / spec.c_p_d
}

/// Detector accuracies integrated over a measurement time, plus their
/// dimensionless POVM equivalents.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorNoiseReport {
    /// sqrt(S_x), m / sqrt(Hz).
    pub sqrt_s_x: f64,
    /// sqrt(S_p), e / sqrt(Hz).
    pub sqrt_s_p: f64,
    /// Displacement accuracy Delta_x = sqrt(S_x / tau_m), m.
    pub delta_x_abs: f64,
    /// Charge accuracy Delta_p = sqrt(S_p / tau_m), e.
    pub delta_p_abs: f64,
    /// Zero-point charge scale of the phase mode sqrt(h nu_phi C_Sigma / 2), e.
    pub q_zp: f64,
    /// Dimensionless POVM widths and device constants.
    pub noise: NoiseAmplitudes,
}

/// Integrates the sensitivities over `tau_m` and converts to the
/// dimensionless POVM widths: delta_x = Delta_x / (2 delta_x0) and
/// delta_p = Delta_p / q_zp with q_zp = sqrt(h nu_phi C_Sigma / 2) in units
/// of e.
pub fn noise_amplitudes(
    spec: &DetectorSpec,
    tau_m: f64,
    derived: &DerivedCircuit,
) -> Result<DetectorNoiseReport> {
    if tau_m <= 0.0 {
        return Err(Error::NonpositiveMeasurementTime(tau_m));
    }
    let sqrt_s_x = displacement_sensitivity(spec);
    let sqrt_s_p = momentum_sensitivity(spec, derived.c_sigma);
    let delta_x_abs = sqrt_s_x / tau_m.sqrt();
    let delta_p_abs = sqrt_s_p / tau_m.sqrt();
    let q_zp = (H_PLANCK * derived.omega_phi * derived.c_sigma / 2.0).sqrt() / E_CHARGE;
    let delta_x = delta_x_abs / (2.0 * derived.delta_x0);
    let delta_p = delta_p_abs / q_zp;
    Ok(DetectorNoiseReport {
        sqrt_s_x,
        sqrt_s_p,
        delta_x_abs,
        delta_p_abs,
        q_zp,
        noise: NoiseAmplitudes::from_deltas(delta_x, delta_p, tau_m)?,
    })
}
