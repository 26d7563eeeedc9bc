//! Newton solver for `θ'' = f(z, θ)` on a uniform grid with ghost-point
//! boundary rows.

use crate::error::{Error, Result};
use crate::numerics::{solve_tridiagonal, Tridiagonal};

/// Values beyond this magnitude are treated as divergence.
const BLOW_UP: f64 = 1e3;

/// One end of the interval.
pub enum EndCondition<'a> {
    Dirichlet(f64),
    /// `weight · θ'(end) = ψ(θ(end))`; `psi` returns `(ψ, dψ/dθ)`.
    /// A zero weight forces `ψ(θ) = 0` at the wall.
    Robin {
        weight: f64,
        psi: &'a dyn Fn(f64) -> (f64, f64),
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Bound on the max-norm of the `h²`-scaled residual.
    pub residual_tol: f64,
    /// Bound on the max-norm of the final Newton update.
    pub update_tol: f64,
    /// Extra iterations tolerated once the residual is below tolerance while
    /// the update is still above `update_tol` (roundoff floor on fine grids).
    pub polish_iterations: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            residual_tol: 1e-10,
            update_tol: 1e-11,
            polish_iterations: 3,
        }
    }
}

/// Converged solution.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub theta: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Discrete two-point problem. `f` returns `(f, ∂f/∂θ)`.
pub struct Bvp<'a> {
    pub z: &'a [f64],
    pub f: &'a dyn Fn(f64, f64) -> (f64, f64),
    pub left: EndCondition<'a>,
    pub right: EndCondition<'a>,
}

impl Bvp<'_> {
    fn h(&self) -> f64 {
        (self.z[self.z.len() - 1] - self.z[0]) / (self.z.len() - 1) as f64
    }

    /// Residual vector and, optionally, its tridiagonal Jacobian.
    fn assemble(&self, theta: &[f64], jac: Option<&mut Tridiagonal>) -> Vec<f64> {
        let n = theta.len();
        let h = self.h();
        let h2 = h * h;
        let mut r = vec![0.0; n];
        let mut jac = jac;
        for i in 1..n - 1 {
            let (fv, fd) = (self.f)(self.z[i], theta[i]);
            r[i] = theta[i - 1] - 2.0 * theta[i] + theta[i + 1] - h2 * fv;
            if let Some(j) = jac.as_deref_mut() {
                j.lower[i - 1] = 1.0;
                j.diag[i] = -2.0 - h2 * fd;
                j.upper[i] = 1.0;
            }
        }
        // the ghost value θ_{∓1} = θ_{±1} ∓ 2hθ' eliminates the flux
        for (end, cond) in [(0, &self.left), (n - 1, &self.right)] {
            let nb = if end == 0 { 1 } else { n - 2 };
            // outward-normal sign: θ' enters with − on the left, + on the right
            let sign = if end == 0 { -1.0 } else { 1.0 };
            match cond {
                EndCondition::Dirichlet(v) => {
                    r[end] = theta[end] - v;
                    if let Some(j) = jac.as_deref_mut() {
                        j.diag[end] = 1.0;
                        if end == 0 {
                            j.upper[0] = 0.0;
                        } else {
                            j.lower[n - 2] = 0.0;
                        }
                    }
                }
                EndCondition::Robin { weight, psi } => {
                    let (fv, fd) = (self.f)(self.z[end], theta[end]);
                    let (pv, pd) = psi(theta[end]);
                    r[end] = weight * (2.0 * theta[nb] - 2.0 * theta[end] - h2 * fv)
                        + sign * 2.0 * h * pv;
                    if let Some(j) = jac.as_deref_mut() {
                        j.diag[end] = weight * (-2.0 - h2 * fd) + sign * 2.0 * h * pd;
                        if end == 0 {
                            j.upper[0] = 2.0 * weight;
                        } else {
                            j.lower[n - 2] = 2.0 * weight;
                        }
                    }
                }
            }
        }
        r
    }

    pub fn residual(&self, theta: &[f64]) -> Vec<f64> {
        self.assemble(theta, None)
    }

    /// Max-norm of the `h²`-scaled discrete residual.
    pub fn residual_norm(&self, theta: &[f64]) -> f64 {
        max_abs(&self.residual(theta))
    }

    /// Damped Newton iteration from `guess`.
    pub fn solve(&self, guess: &[f64], opts: &NewtonOptions) -> Result<BvpSolution> {
        let n = self.z.len();
        if n < 3 || guess.len() != n {
            return Err(Error::InvalidParameter(format!(
                "guess has {} nodes, grid has {n}",
                guess.len()
            )));
        }
        let mut theta = guess.to_vec();
        let mut jac = Tridiagonal::zeros(n);
        let mut r = self.assemble(&theta, Some(&mut jac));
        let mut norm = max_abs(&r);
        let mut polish = 0;
        for it in 1..=opts.max_iterations {
            let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
            let Some(delta) = solve_tridiagonal(&jac, &rhs) else {
                return Err(Error::Diverged("singular Jacobian".into()));
            };
            let step = max_abs(&delta);
            if !step.is_finite() {
                return Err(Error::Diverged("non-finite Newton update".into()));
            }
            // backtrack on the residual max-norm
            let mut lambda = 1.0;
            let (trial, trial_norm) = loop {
                let t: Vec<f64> = theta
                    .iter()
                    .zip(&delta)
                    .map(|(a, d)| a + lambda * d)
                    .collect();
                let tn = self.residual_norm(&t);
                if tn.is_finite()
                    && (tn <= (1.0 - 1e-4 * lambda) * norm
                        || lambda < 1.0 / 64.0
                        || norm < opts.residual_tol)
                {
                    break (t, tn);
                }
                lambda *= 0.5;
            };
            if !trial_norm.is_finite() || trial.iter().any(|v| v.abs() > BLOW_UP) {
                return Err(Error::Diverged(format!(
                    "iterate left the bounded region at step {it}"
                )));
            }
            theta = trial;
            norm = trial_norm;
            if norm < opts.residual_tol {
                if lambda * step < opts.update_tol || polish >= opts.polish_iterations {
                    return Ok(BvpSolution {
                        theta,
                        residual_norm: norm,
                        iterations: it,
                    });
                }
                polish += 1;
            }
            r = self.assemble(&theta, Some(&mut jac));
        }
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            residual: norm,
        })
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0,
        |m: f64, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_nodes;

    #[test]
    fn linear_problem_exact_for_quadratics() {
        // θ'' = 2, θ(−1) = 1, θ'(1)·1 = 2 ⇒ θ = z²
        let z = uniform_nodes(41, -1.0, 1.0);
        let f = |_: f64, _: f64| (2.0, 0.0);
        let psi = |_: f64| (2.0, 0.0);
        let bvp = Bvp {
            z: &z,
            f: &f,
            left: EndCondition::Dirichlet(1.0),
            right: EndCondition::Robin {
                weight: 1.0,
                psi: &psi,
            },
        };
        let sol = bvp
            .solve(&vec![0.0; 41], &NewtonOptions::default())
            .unwrap();
        for (zi, t) in z.iter().zip(&sol.theta) {
            assert!((t - zi * zi).abs() < 1e-12);
        }
        let left_psi = |_: f64| (-2.0, 0.0);
        let bvp = Bvp {
            z: &z,
            f: &f,
            left: EndCondition::Robin {
                weight: 1.0,
                psi: &left_psi,
            },
            right: EndCondition::Dirichlet(1.0),
        };
        let sol = bvp
            .solve(&vec![0.0; 41], &NewtonOptions::default())
            .unwrap();
        for (zi, t) in z.iter().zip(&sol.theta) {
            assert!((t - zi * zi).abs() < 1e-12);
        }
    }

    #[test]
    fn nonlinear_pendulum_second_order() {
        // θ'' = −sin θ with θ(−1) = 0, θ(1) = 1; compare two resolutions
        let solve = |n: usize| {
            let z = uniform_nodes(n, -1.0, 1.0);
            let f = |_: f64, t: f64| (-t.sin(), -t.cos());
            let bvp = Bvp {
                z: &z,
                f: &f,
                left: EndCondition::Dirichlet(0.0),
                right: EndCondition::Dirichlet(1.0),
            };
            let guess: Vec<f64> = z.iter().map(|v| (v + 1.0) / 2.0).collect();
            bvp.solve(&guess, &NewtonOptions::default()).unwrap().theta
        };
        let (a, b, c) = (solve(21), solve(41), solve(81));
        let e1 = (a[10] - c[40]).abs();
        let e2 = (b[20] - c[40]).abs();
        let ratio = (e1 - e2) / e2;
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn divergence_is_reported() {
        let z = uniform_nodes(21, -1.0, 1.0);
        let f = |_: f64, t: f64| (t.exp(), t.exp());
        let bvp = Bvp {
            z: &z,
            f: &f,
            left: EndCondition::Dirichlet(0.0),
            right: EndCondition::Dirichlet(0.0),
        };
        // a wildly wrong guess must end in a clean outcome, never a panic
        match bvp.solve(&[50.0; 21], &NewtonOptions::default()) {
            Ok(s) => assert!(s.residual_norm < 1e-10),
            Err(e) => assert!(matches!(
                e,
                Error::Diverged(_) | Error::NoConvergence { .. }
            )),
        }
    }
}
