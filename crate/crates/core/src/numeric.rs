//! Small numeric helpers: bisection root finding on monotone functions.

/// Bisection root of `f` on `[lo, hi]`, requiring a sign change across the
/// bracket. Stops when the bracket is narrower than `tol_abs` or
/// `tol_rel * |mid|`.
pub fn bisect<F>(mut lo: f64, mut hi: f64, f: F, tol_abs: f64, tol_rel: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    assert!(
        flo.signum() != fhi.signum(),
        "bisect: no sign change on bracket [{lo}, {hi}] (f = {flo}, {fhi})"
    );

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        if width < tol_abs || width < tol_rel * mid.abs() {
            return mid;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
