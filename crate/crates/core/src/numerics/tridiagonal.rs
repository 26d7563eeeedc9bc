/// A tridiagonal matrix stored by diagonals: `lower[i]` couples row `i+1` to
/// column `i`, `upper[i]` couples row `i` to column `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting
/// (the `gtsv` scheme). Returns `None` for a numerically singular matrix.
pub fn solve_tridiagonal(a: &Tridiagonal, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    assert_eq!(rhs.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut dl = a.lower.clone();
    let mut d = a.diag.clone();
    let mut du = a.upper.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    let scale = d
        .iter()
        .chain(dl.iter())
        .chain(du.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tiny = scale * f64::EPSILON * 1e-3;

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() <= tiny {
                return None;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            }
            du[i] = tmp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
    }
    if d[n - 1].abs() <= tiny {
        return None;
    }
    // with interchanges, dl[i] holds the second superdiagonal entry of row i
    let m = n.saturating_sub(2);
    du2[..m].copy_from_slice(&dl[..m]);
    let mut x = b;
    x[n - 1] /= d[n - 1];
    if n > 1 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `x` (Sturm sequence count).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, ascending,
/// by Sturm-sequence bisection.
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1));
    let k = k.min(n);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let width = (hi - lo).abs().max(1.0);
    lo -= 1e-12 * width;
    hi += 1e-12 * width;
    (0..k)
        .map(|j| {
            // find x with count_below(x) ≤ j < count_below(x')
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(diag, off, mid) > j {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
