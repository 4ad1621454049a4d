//! Simulation library for a continuous-variable quantum teleportation
//! protocol between two nanomechanical modes connected through a
//! superconducting circuit (Josephson phase modes plus a transmission-line
//! resonator).
//!
//! The crate covers the full chain from raw device parameters to a
//! teleportation fidelity:
//!
//! - [`gaussian`]: multimode Gaussian states, symplectic operations,
//!   noisy homodyne conditioning, and single-mode Uhlmann fidelity;
//! - [`circuit`]: derivation of circuit energies, mode frequencies and
//!   coupling constants from device parameters, the validity-hierarchy
//!   checker, and the protocol schedule;
//! - [`teleport`]: the teleportation channel in closed form, critical
//!   noise/measurement-time analysis, parameter sweeps, and an end-to-end
//!   pipeline executor (analytic + Monte Carlo);
//! - [`detector`]: the single-electron-transistor mixer readout model:
//!   Bessel-demodulated current response and shot-noise-limited
//!   displacement/momentum sensitivities;
//! - [`wigner`]: a brute-force grid/quadrature layer used to certify the
//!   closed forms numerically.
//!
//! # Example
//!
//! From raw device parameters to the teleportation fidelity of a coherent
//! state at the reference operating point:
//!
//! ```
//! use cvteleport_core::circuit::{derive, DeviceParams};
//! use cvteleport_core::detector::{noise_amplitudes, DetectorSpec};
//! use cvteleport_core::teleport::{channel_mu, fidelity_closed_form, theta_of};
//!
//! let device = DeviceParams::reference();
//! let derived = derive(&device).unwrap();
//! let readout = noise_amplitudes(&DetectorSpec::reference(), 50e-9, &derived).unwrap();
//! let theta_a2 = theta_of(device.omega_nr, device.temperature);
//! let channel = channel_mu(1.5, theta_a2, &readout.noise);
//! let fidelity = fidelity_closed_form(&channel, 1.0);
//! assert!((fidelity - 0.78).abs() < 0.01);
//! assert!(fidelity > 0.5); // beats the classical limit
//! ```

pub mod bessel;
pub mod circuit;
pub mod consts;
pub mod detector;
pub mod error;
pub mod gaussian;
pub mod numeric;
pub mod teleport;
pub mod wigner;

pub use error::{Error, Result};
pub use gaussian::{gaussian_fidelity, GaussianState, Quadrature, SymplecticOp};
