//! Bessel functions of the first kind, J0 and J1, by upward power series.
//!
//! The mixer model only needs moderate arguments (gate drive alpha_g <= 5),
//! where the alternating series converges in a few dozen terms at full f64
//! precision. Values are cross-checked in tests against a frozen reference
//! table.

/// J_n(x) for small n and |x| up to ~12 by the ascending power series
/// J_n(x) = sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!).
pub fn bessel_jn(n: u32, x: f64) -> f64 {
    debug_assert!(x.abs() <= 12.0, "series Jn is used for |x| <= 12 only");
    let half = 0.5 * x;
    // term_0 = (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-30) && k < 80.0 {
        term *= -(half * half) / (k * (k + n as f64));
        sum += term;
        k += 1.0;
    }
    sum
}

/// J_0(x).
pub fn bessel_j0(x: f64) -> f64 {
    bessel_jn(0, x)
}

/// J_1(x).
pub fn bessel_j1(x: f64) -> f64 {
    bessel_jn(1, x)
}
