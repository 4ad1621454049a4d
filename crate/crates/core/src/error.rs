//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("covariance matrix is not symmetric (max asymmetry {0:.3e})")]
    AsymmetricCovariance(f64),

    #[error("covariance has wrong shape: expected {expected}x{expected}, got {rows}x{cols}")]
    CovarianceShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("state violates the uncertainty principle (min symplectic eigenvalue {0:.6e} < 0.25)")]
    UnphysicalState(f64),

    #[error("thermal index must satisfy theta >= 1, got {0}")]
    SubVacuumTheta(f64),

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("operation requires two distinct modes, got {0} twice")]
    DuplicateMode(usize),

    #[error("measurement noise amplitude must be nonnegative, got {0}")]
    NegativeNoise(f64),

    #[error("partial trace needs a nonempty, duplicate-free list of kept modes")]
    BadKeepList,

    #[error("fidelity is defined here for single-mode states, got {0} and {1} modes")]
    NotSingleMode(usize, usize),

    #[error("invalid device parameters: {0}")]
    InvalidDevice(String),

    #[error("cos(phi_ex) <= 0 leaves the effective Josephson energy nonpositive")]
    NonpositiveJosephson,

    #[error("coupling constants must be positive to build a schedule")]
    NonpositiveCoupling,

    #[error("squeeze parameter must be positive, got {0}")]
    NonpositiveSqueeze(f64),

    #[error("measurement time must be positive, got {0}")]
    NonpositiveMeasurementTime(f64),

    #[error("grid axis count {0} unsupported (expected 2 or 4)")]
    BadGridShape(usize),

    #[error("grids must share identical axes for this operation")]
    GridMismatch,

    #[error("grid range [{lo}, {hi}] covers only {coverage:.2} standard deviations (need >= {required})")]
    GridRangeTooNarrow {
        lo: f64,
        hi: f64,
        coverage: f64,
        required: f64,
    },

    #[error(
        "grid step {step:.3e} too coarse to resolve convolution kernel of width {kernel_sigma:.3e}"
    )]
    GridTooCoarse { step: f64, kernel_sigma: f64 },

    #[error("quadrature range insufficient: edge density {edge:.3e} exceeds {limit:.3e} of peak")]
    QuadratureRange { edge: f64, limit: f64 },

    #[error(
        "overlap fidelity requires at least one (near-)pure state; best purity estimate {0:.4}"
    )]
    OverlapNeedsPureState(f64),

    #[error("quadrature-factorized integration needs a diagonal input covariance (x-p cross term {0:.3e})")]
    NonDiagonalInput(f64),

    #[error("empty sweep grid")]
    EmptySweep,
}

pub type Result<T> = std::result::Result<T, Error>;
