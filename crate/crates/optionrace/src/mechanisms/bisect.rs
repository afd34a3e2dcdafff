//! Minimal sign-change bisection shared by the mechanism solvers.

/// Smallest `x` in `[lo, hi]` with `f(x) >= 0`, given `f(lo) < 0 <= f(hi)`
/// and a single sign change on the interval. Runs to floating-point
/// convergence; the iteration cap is a backstop it never reaches for
/// brackets narrower than ~1e12.
pub(crate) fn bisect_smallest_nonnegative(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const MAX_ITER: u32 = 200;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
