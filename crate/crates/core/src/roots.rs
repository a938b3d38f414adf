//! Bracketing root finders shared by the solvers.

/// Bisection on a function that is positive at `lo` and non-positive at `hi`
/// (or the reverse). Stops when the bracket is narrower than `tol` or cannot
/// shrink further in f64. Returns the bracket midpoint.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let lo_positive = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest `x` in `[lo, hi]` with `pred(x)` true, for a predicate that is true
/// on a prefix of the interval. `pred(lo)` is assumed true.
pub fn last_true<F>(mut pred: F, lo: f64, hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> bool,
{
    if pred(hi) {
        return hi;
    }
    let (mut good, mut bad) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        if mid <= good || mid >= bad || bad - good <= tol {
            break;
        }
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reversed_sign_bracket() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0, 1e-14);
        assert!((r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn last_true_prefix() {
        let r = last_true(|x| x <= 0.3, 0.0, 1.0, 1e-12);
        assert!((r - 0.3).abs() < 1e-11);
        assert_eq!(last_true(|_| true, 0.0, 1.0, 1e-12), 1.0);
    }
}
