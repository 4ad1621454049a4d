//! Physical constants (CODATA 2018 exact values, SI units).

/// Planck constant, J s.
pub const H_PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = H_PLANCK / (2.0 * std::f64::consts::PI);

/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// Vacuum quadrature variance in the dimensionless convention used
/// throughout this crate: x = (a + a†)/2, so Var(x) = Var(p) = 1/4.
pub const VACUUM_VARIANCE: f64 = 0.25;
