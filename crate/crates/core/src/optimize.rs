//! One-dimensional root bracketing and golden-section maximization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Bisects a sign change of `f` on `[lo, hi]` down to `x_tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if (hi - lo).abs() <= x_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First sub-interval of `(start, end]` (scanned with `step`) where `f`
/// changes from positive to non-positive.
pub fn first_descending_crossing<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    end: f64,
    step: f64,
) -> Option<(f64, f64)> {
    let mut x = start;
    let mut fx = f(x);
    while x < end {
        let next = (x + step).min(end);
        let f_next = f(next);
        if fx > 0.0 && f_next <= 0.0 {
            return Some((x, next));
        }
        x = next;
        fx = f_next;
    }
    None
}

/// Maximizes a unimodal `f` on `[a, b]`; returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
