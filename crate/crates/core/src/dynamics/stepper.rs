//! Semi-implicit time stepping of
//! `(γ₁g − m²)θ_t = g(θ)θ_zz + 𝒢(t)zm(θ)`.
//!
//! Diffusion is backward Euler with coefficients frozen at `θⁿ`, the source
//! is explicit and the wall flux is taken implicitly by a short fixed-point
//! iteration. Each pass linearizes the flux about the current iterate where
//! the linearization is dissipative and lags it elsewhere.

use serde::{Deserialize, Serialize};

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;
use crate::numerics::{solve_tridiagonal, Tridiagonal};
use crate::statics::static_residual;

use super::schedule::Schedule;

/// Cap on the wall-flux fixed-point passes per step.
const BOUNDARY_ITERATIONS: usize = 8;
const BLOW_UP: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeStepperConfig {
    pub dz: f64,
    pub dt: f64,
    pub t_max: f64,
    /// Threshold on `max|θ_t|`.
    pub steady_tol: f64,
    /// Consecutive steady checks required.
    pub steady_window: usize,
    /// Steps between steady checks.
    pub check_every: usize,
    /// Record the profile every this many steps (0 disables).
    pub snapshot_every: usize,
}

impl Default for TimeStepperConfig {
    fn default() -> Self {
        Self {
            dz: 0.0125,
            dt: 0.01,
            t_max: 5e3,
            steady_tol: 1e-8,
            steady_window: 10,
            check_every: 100,
            snapshot_every: 0,
        }
    }
}

impl TimeStepperConfig {
    /// Node count implied by `dz`.
    pub fn nodes(&self) -> Result<usize> {
        let intervals = 2.0 / self.dz;
        let k = intervals.round();
        if !(self.dz > 0.0) || (intervals - k).abs() > 1e-9 * k || k < 2.0 {
            return Err(Error::InvalidParameter(format!(
                "dz = {} does not divide [-1, 1]",
                self.dz
            )));
        }
        if !(self.dt > 0.0)
            || !(self.steady_tol > 0.0)
            || self.steady_window == 0
            || self.check_every == 0
        {
            return Err(Error::InvalidParameter(
                "dt, steady_tol, window and check spacing must be positive".into(),
            ));
        }
        Ok(k as usize + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryResult {
    pub final_profile: GridProfile,
    pub final_omega: f64,
    /// Start of the steady window.
    pub t_steady: Option<f64>,
    pub t_final: f64,
    pub converged: bool,
    pub steps: usize,
    /// `(t, max|θ_t|)` at every check.
    pub rate_history: Vec<(f64, f64)>,
    pub snapshots: Vec<Snapshot>,
}

/// Initial-condition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Constant,
    Linear,
    LinearPlusHalfPi,
}

impl std::str::FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "linear" => Ok(Self::Linear),
            "linear_plus_half_pi" | "linear-plus-half-pi" => Ok(Self::LinearPlusHalfPi),
            other => Err(Error::InvalidParameter(format!(
                "unknown initial kind {other:?}"
            ))),
        }
    }
}

/// `Θ = C`, `Cz` or `Cz + π/2`.
pub fn make_initial(kind: InitialKind, c: f64, n: usize) -> GridProfile {
    match kind {
        InitialKind::Constant => GridProfile::constant(n, c),
        InitialKind::Linear => GridProfile::from_fn(n, |z| c * z),
        InitialKind::LinearPlusHalfPi => {
            GridProfile::from_fn(n, |z| c * z + std::f64::consts::FRAC_PI_2)
        }
    }
}

struct Stepper<'a> {
    coeffs: &'a LeslieCoefficients,
    schedule: &'a Schedule,
    z: Vec<f64>,
    h: f64,
    dt: f64,
    matrix: Tridiagonal,
    rhs: Vec<f64>,
}

impl Stepper<'_> {
    /// Advances `theta` from `t` to `t + dt`.
    fn step(&mut self, theta: &[f64], t: f64) -> Option<Vec<f64>> {
        let n = theta.len();
        let (h, dt) = (self.h, self.dt);
        let tn = t + dt;
        let g_t = self.schedule.pressure_at(tn);
        let weight = self.schedule.anchoring_weight(tn);
        let c = self.schedule.initial_flux();
        let b = self.schedule.inverse_anchoring();
        let ih2 = 1.0 / (h * h);
        let a = &mut self.matrix;
        for i in 0..n {
            let th = theta[i];
            let w = self.coeffs.relaxation(th) / dt;
            let gi = self.coeffs.g(th) * ih2;
            a.diag[i] = w + 2.0 * gi;
            if i > 0 {
                a.lower[i - 1] = -gi;
            }
            if i + 1 < n {
                a.upper[i] = -gi;
            }
            self.rhs[i] = w * th + g_t * self.z[i] * self.coeffs.m(th);
        }
        // wall flux θ_z = p + q·θ^{n+1}, linearized about the latest iterate
        // where that is dissipative and lagged elsewhere
        let flux = |angle: f64, sign: f64| {
            let s = (2.0 * angle).sin();
            let cs = (2.0 * (2.0 * angle).cos()).max(0.0);
            let p = c * (1.0 - weight) + sign * weight * (s - cs * angle) / b;
            let q = sign * weight * cs / b;
            (p, q)
        };
        let g0 = self.coeffs.g(theta[0]) * ih2;
        let gn = self.coeffs.g(theta[n - 1]) * ih2;
        let base_diag = (a.diag[0], a.diag[n - 1]);
        let base_rhs = (self.rhs[0], self.rhs[n - 1]);
        let (mut lo, mut hi) = (theta[0], theta[n - 1]);
        let mut out = None;
        for _ in 0..BOUNDARY_ITERATIONS {
            let (p_lo, q_lo) = if self.schedule.literal_lower_flux {
                // lower wall driven by the upper-wall angle, explicitly
                let s = (2.0 * theta[n - 1]).sin();
                (c * (1.0 - weight) + weight * s / b, 0.0)
            } else {
                flux(lo, 1.0)
            };
            let (p_hi, q_hi) = flux(hi, -1.0);
            // ghost nodes: θ_{−1} = θ_1 − 2hθ_z(−1), θ_n = θ_{n−2} + 2hθ_z(1)
            a.upper[0] = -2.0 * g0;
            a.diag[0] = base_diag.0 + 2.0 * h * g0 * q_lo;
            self.rhs[0] = base_rhs.0 - 2.0 * h * g0 * p_lo;
            a.lower[n - 2] = -2.0 * gn;
            a.diag[n - 1] = base_diag.1 - 2.0 * h * gn * q_hi;
            self.rhs[n - 1] = base_rhs.1 + 2.0 * h * gn * p_hi;
            let x = solve_tridiagonal(a, &self.rhs)?;
            let change = (x[0] - lo).abs().max((x[n - 1] - hi).abs());
            lo = x[0];
            hi = x[n - 1];
            out = Some(x);
            if change < 1e-13 {
                break;
            }
        }
        out
    }
}

/// Integrates from `initial` under `schedule`.
pub fn evolve(
    coeffs: &LeslieCoefficients,
    initial: &GridProfile,
    schedule: &Schedule,
    cfg: &TimeStepperConfig,
) -> Result<TrajectoryResult> {
    schedule.validate()?;
    let n = cfg.nodes()?;
    if initial.n_points() != n {
        return Err(Error::InvalidParameter(format!(
            "initial profile has {} nodes, the time grid needs {n}",
            initial.n_points()
        )));
    }
    let mut stepper = Stepper {
        coeffs,
        schedule,
        z: initial.z.clone(),
        h: initial.spacing(),
        dt: cfg.dt,
        matrix: Tridiagonal::zeros(n),
        rhs: vec![0.0; n],
    };
    let max_steps = (cfg.t_max / cfg.dt).round() as usize;
    let mut theta = initial.theta.clone();
    let mut rate_history = Vec::new();
    let mut snapshots = Vec::new();
    if cfg.snapshot_every > 0 {
        snapshots.push(Snapshot {
            t: 0.0,
            theta: theta.clone(),
        });
    }
    let mut streak = 0usize;
    let mut streak_start = 0.0;
    let mut t_steady = None;
    let mut steps = 0;
    let mut t = 0.0;
    for k in 0..max_steps {
        let next = stepper
            .step(&theta, t)
            .ok_or_else(|| Error::Diverged(format!("singular step matrix at t = {t}")))?;
        steps = k + 1;
        let t_next = steps as f64 * cfg.dt;
        if next.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP) {
            return Err(Error::Diverged(format!("solution blew up at t = {t_next}")));
        }
        if k % cfg.check_every == 0 {
            let rate = theta
                .iter()
                .zip(&next)
                .map(|(a, b)| (b - a).abs())
                .fold(0.0, f64::max)
                / cfg.dt;
            rate_history.push((t_next, rate));
            if rate < cfg.steady_tol && schedule.settled(t) {
                if streak == 0 {
                    streak_start = t;
                }
                streak += 1;
            } else {
                streak = 0;
            }
        }
        theta = next;
        t = t_next;
        if cfg.snapshot_every > 0 && steps % cfg.snapshot_every == 0 {
            snapshots.push(Snapshot {
                t,
                theta: theta.clone(),
            });
        }
        if streak >= cfg.steady_window {
            t_steady = Some(streak_start);
            break;
        }
    }
    let mut final_profile = GridProfile::from_values(theta);
    final_profile.residual_norm = static_residual(
        coeffs,
        schedule.final_pressure(),
        schedule.inverse_anchoring(),
        &final_profile,
    );
    Ok(TrajectoryResult {
        final_omega: final_profile.winding_number(),
        final_profile,
        converged: t_steady.is_some(),
        t_steady,
        t_final: t,
        steps,
        rate_history,
        snapshots,
    })
}
