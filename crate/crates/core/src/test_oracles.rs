//! Brute-force minimizers used only by unit tests.

/// Minimizes a convex function on `[lo, hi]` by bisection on the sign of a central
/// difference slope.
pub fn minimize_convex_1d(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let eps = 1e-7 * (1.0 + mid.abs());
        if f(mid + eps) < f(mid - eps) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Grid search refined around the best point until the spacing drops below `tol`.
pub fn grid_minimize_1d(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut best = lo;
    loop {
        let steps = 200;
        let dx = (hi - lo) / steps as f64;
        let mut best_v = f64::INFINITY;
        for s in 0..=steps {
            let t = lo + dx * s as f64;
            let v = f(t);
            if v < best_v {
                best_v = v;
                best = t;
            }
        }
        if dx < tol {
            return best;
        }
        lo = (best - 2.0 * dx).max(lo);
        hi = (best + 2.0 * dx).min(hi);
    }
}
