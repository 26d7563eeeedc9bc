/// Bisection on `[lo, hi]` for a continuous `f` with `f(lo)·f(hi) ≤ 0`.
///
/// Runs until the bracket is narrower than `tol` or can no longer be split
/// in floating point. Returns `None` when the endpoints do not bracket a root.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Finds sign changes of `f` across the ordered sample `nodes` and refines
/// each one by bisection. Stops after `max_roots` roots.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, nodes: &[f64], tol: f64, max_roots: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let Some(&first) = nodes.first() else {
        return roots;
    };
    let mut x_prev = first;
    let mut f_prev = f(first);
    for &x in &nodes[1..] {
        if roots.len() >= max_roots {
            break;
        }
        let fx = f(x);
        if f_prev != 0.0 && fx != 0.0 && f_prev.signum() != fx.signum() {
            if let Some(r) = bisect(&f, x_prev, x, tol) {
                roots.push(r);
            }
        } else if fx == 0.0 {
            roots.push(x);
        }
        x_prev = x;
        f_prev = fx;
    }
    roots
}
