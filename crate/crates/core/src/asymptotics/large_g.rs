//! Outer states and boundary layers as `𝒢 → ∞`.
//!
//! Away from `z = 0, ±1` the director sits at a flow-aligned state
//! `σₖ± = ±arctan√(α₂/α₃) + kπ`. Wall layers live on `η = √𝒢(1 ± z)` and
//! the centre layer on `ξ = 𝒢^{1/3}z`.

use serde::Serialize;
use std::f64::consts::PI;

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::{uniform_nodes, GridProfile};
use crate::statics::bvp::{Bvp, EndCondition, NewtonOptions};

pub const WALL_TRUNCATION: f64 = 10.0;
pub const CENTER_TRUNCATION: f64 = 12.0;
pub const DEFAULT_LAYER_NODES: usize = 2001;
/// Largest accepted `|θ(L) − σ|` for a layer solution.
pub const MATCHING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Center,
    Right,
}

/// A flow-aligned outer value `σₖ±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OuterState {
    pub k: i32,
    pub positive: bool,
}

impl OuterState {
    pub fn value(self, coeffs: &LeslieCoefficients) -> Result<f64> {
        outer_value(coeffs, self.k, self.positive)
    }
}

/// `σₖ± = ±arctan√(α₂/α₃) + kπ`.
pub fn outer_value(coeffs: &LeslieCoefficients, k: i32, positive: bool) -> Result<f64> {
    let s = coeffs.flow_alignment_angle()?;
    Ok(if positive { s } else { -s } + k as f64 * PI)
}

/// Nearest outer state to `theta`.
pub fn nearest_outer_state(coeffs: &LeslieCoefficients, theta: f64) -> Result<OuterState> {
    let s = coeffs.flow_alignment_angle()?;
    let best = |positive: bool| {
        let base = if positive { s } else { -s };
        let k = ((theta - base) / PI).round() as i32;
        (
            OuterState { k, positive },
            (theta - base - k as f64 * PI).abs(),
        )
    };
    let (p, dp) = best(true);
    let (m, dm) = best(false);
    Ok(if dp <= dm { p } else { m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerSolution {
    pub side: Side,
    /// Stretched coordinate: `η ∈ [0, L]` at the walls, `ξ ∈ [−L, L]` at the centre.
    pub stretched: Vec<f64>,
    pub theta: Vec<f64>,
    pub truncation: f64,
    /// Far-field values at the two ends of the stretched domain; walls
    /// repeat the single matching value.
    pub far_field: (f64, f64),
    /// Rescaled inverse anchoring `√𝒢𝓑` (walls only; `None` is `𝓑̄ = ∞`).
    pub b_bar: Option<f64>,
}

impl LayerSolution {
    /// Linear interpolation, clamped to the far field outside the domain.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.stretched.len();
        let (lo, hi) = (self.stretched[0], self.stretched[n - 1]);
        if s <= lo {
            return self.theta[0];
        }
        if s >= hi {
            return self.theta[n - 1];
        }
        let h = (hi - lo) / (n - 1) as f64;
        let u = (s - lo) / h;
        let i = (u.floor() as usize).min(n - 2);
        let t = u - i as f64;
        self.theta[i] * (1.0 - t) + self.theta[i + 1] * t
    }

    pub fn boundary_value(&self) -> f64 {
        self.theta[0]
    }

    /// `|θ(L) − σ|`; zero by construction for Dirichlet far ends.
    pub fn matching_error(&self) -> f64 {
        let n = self.theta.len();
        match self.side {
            Side::Center => (self.theta[0] - self.far_field.0)
                .abs()
                .max((self.theta[n - 1] - self.far_field.1).abs()),
            _ => (self.theta[n - 1] - self.far_field.1).abs(),
        }
    }
}

/// Wall layer `θ'' = ∓Q(θ)` (left/right) on `[0, L]` with
/// `𝓑̄θ'(0) = sin 2θ(0)` and `θ(L) = σ`.
///
/// The solution is reached by homotopy in `1/𝓑̄` from the Neumann limit,
/// whose solution is the constant `σ`; this also fixes which boundary
/// value is selected when several exist.
pub fn solve_wall_layer(
    coeffs: &LeslieCoefficients,
    side: Side,
    b_bar: Option<f64>,
    sigma: f64,
    truncation: f64,
    n: usize,
) -> Result<LayerSolution> {
    let sign = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
        Side::Center => return Err(Error::InvalidParameter("use solve_center_layer".into())),
    };
    if let Some(bb) = b_bar {
        if !(bb > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rescaled anchoring must be positive, got {bb}"
            )));
        }
    }
    let eta = uniform_nodes(n, 0.0, truncation);
    let f = |_: f64, t: f64| (sign * coeffs.q(t), sign * coeffs.q_prime(t));
    let eps_target = b_bar.map_or(0.0, |bb| 1.0 / bb);
    let mut theta = vec![sigma; n];
    let mut eps = 0.0;
    let mut step = eps_target / 8.0;
    let opts = NewtonOptions::default();
    while eps < eps_target {
        let next = (eps + step).min(eps_target);
        let psi = move |t: f64| (next * (2.0 * t).sin(), 2.0 * next * (2.0 * t).cos());
        let bvp = Bvp {
            z: &eta,
            f: &f,
            left: EndCondition::Robin {
                weight: 1.0,
                psi: &psi,
            },
            right: EndCondition::Dirichlet(sigma),
        };
        match bvp.solve(&theta, &opts) {
            Ok(sol) if (sol.theta[0] - theta[0]).abs() < 0.5 => {
                theta = sol.theta;
                eps = next;
                step *= 1.5;
            }
            _ => {
                step *= 0.5;
                if step < 1e-9 * eps_target.max(1.0) {
                    return Err(Error::NoConvergence {
                        iterations: opts.max_iterations,
                        residual: f64::NAN,
                    });
                }
            }
        }
    }
    let out = LayerSolution {
        side,
        stretched: eta,
        theta,
        truncation,
        far_field: (sigma, sigma),
        b_bar,
    };
    check_matching(out)
}

/// Centre layer `θ'' = ξQ(θ)` on `[−L, L]`, `θ(−L) = σ₁`, `θ(L) = σ₂`.
pub fn solve_center_layer(
    coeffs: &LeslieCoefficients,
    sigma_left: f64,
    sigma_right: f64,
    truncation: f64,
    n: usize,
) -> Result<LayerSolution> {
    let xi = uniform_nodes(n, -truncation, truncation);
    let f = |x: f64, t: f64| (x * coeffs.q(t), x * coeffs.q_prime(t));
    let opts = NewtonOptions::default();
    let solve = |right: f64, guess: &[f64]| {
        let bvp = Bvp {
            z: &xi,
            f: &f,
            left: EndCondition::Dirichlet(sigma_left),
            right: EndCondition::Dirichlet(right),
        };
        bvp.solve(guess, &opts)
    };
    let jump = sigma_right - sigma_left;
    let tanh_guess: Vec<f64> = xi
        .iter()
        .map(|&x| sigma_left + jump * 0.5 * (1.0 + x.tanh()))
        .collect();
    let theta = match solve(sigma_right, &tanh_guess) {
        Ok(sol) => sol.theta,
        Err(_) => {
            // homotopy in the right-hand end value from the constant state
            let mut theta = vec![sigma_left; n];
            let mut t = 0.0f64;
            let mut step = 0.1f64;
            while t < 1.0 {
                let next = (t + step).min(1.0);
                let end = sigma_left + next * jump;
                let mut guess = theta.clone();
                for (g, x) in guess.iter_mut().zip(&xi) {
                    *g += (next - t) * jump * (x + truncation) / (2.0 * truncation);
                }
                match solve(end, &guess) {
                    Ok(sol) => {
                        theta = sol.theta;
                        t = next;
                        step = (step * 1.5).min(0.25);
                    }
                    Err(e) => {
                        step *= 0.5;
                        if step < 1e-6 {
                            return Err(e);
                        }
                    }
                }
            }
            theta
        }
    };
    let out = LayerSolution {
        side: Side::Center,
        stretched: xi,
        theta,
        truncation,
        far_field: (sigma_left, sigma_right),
        b_bar: None,
    };
    check_matching(out)
}

fn check_matching(layer: LayerSolution) -> Result<LayerSolution> {
    let err = layer.matching_error();
    if err > MATCHING_TOL {
        return Err(Error::Undefined(format!(
            "{:?} layer misses its far field by {err:.3e}",
            layer.side
        )));
    }
    Ok(layer)
}

/// The three layers of one large-`𝒢` approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeGComposite {
    pub g: f64,
    pub b: f64,
    pub left_state: OuterState,
    pub right_state: OuterState,
    pub left: LayerSolution,
    pub center: LayerSolution,
    pub right: LayerSolution,
}

impl LargeGComposite {
    /// Additive composite `θ_C + (θ_L − σ₁) + (θ_R − σ₂)` at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        let sg = self.g.sqrt();
        let cg = self.g.cbrt();
        let s1 = self.left.far_field.1;
        let s2 = self.right.far_field.1;
        self.center.eval(cg * z)
            + (self.left.eval(sg * (z + 1.0)) - s1)
            + (self.right.eval(sg * (1.0 - z)) - s2)
    }

    pub fn profile(&self, n: usize) -> GridProfile {
        GridProfile::from_fn(n, |z| self.eval(z))
    }
}

/// Builds the composite for outer states `(σ₁, σ₂)` on `z < 0` and `z > 0`.
pub fn composite_large_g(
    coeffs: &LeslieCoefficients,
    left_state: OuterState,
    right_state: OuterState,
    g: f64,
    b: f64,
    layer_nodes: usize,
) -> Result<LargeGComposite> {
    if !(g > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "pressure gradient must be positive, got {g}"
        )));
    }
    let s1 = left_state.value(coeffs)?;
    let s2 = right_state.value(coeffs)?;
    let b_bar = if b > 0.0 { Some(g.sqrt() * b) } else { None };
    if b == 0.0 {
        return Err(Error::InvalidParameter(
            "strong anchoring has no Robin layer problem".into(),
        ));
    }
    let left = solve_wall_layer(coeffs, Side::Left, b_bar, s1, WALL_TRUNCATION, layer_nodes)?;
    let right = solve_wall_layer(coeffs, Side::Right, b_bar, s2, WALL_TRUNCATION, layer_nodes)?;
    let center = solve_center_layer(coeffs, s1, s2, CENTER_TRUNCATION, layer_nodes)?;
    Ok(LargeGComposite {
        g,
        b,
        left_state,
        right_state,
        left,
        center,
        right,
    })
}

/// Outer states read off a full solution at `z = ∓½`.
pub fn extract_outer_states(
    coeffs: &LeslieCoefficients,
    profile: &GridProfile,
) -> Result<(OuterState, OuterState)> {
    Ok((
        nearest_outer_state(coeffs, profile.interpolate(-0.5))?,
        nearest_outer_state(coeffs, profile.interpolate(0.5))?,
    ))
}

/// Wall-layer widths `(left, right)`: distance from the wall at which
/// `|θ − σ|` first drops below `fraction·|θ(wall) − σ|`, with `σ` the
/// outer state nearest `θ(∓½)`.
pub fn layer_width(
    coeffs: &LeslieCoefficients,
    profile: &GridProfile,
    fraction: f64,
) -> Result<(f64, f64)> {
    let (ls, rs) = extract_outer_states(coeffs, profile)?;
    let n = profile.n_points();
    let left = wall_width(profile, ls.value(coeffs)?, (0..n).collect(), fraction)?;
    let right = wall_width(profile, rs.value(coeffs)?, (0..n).rev().collect(), fraction)?;
    Ok((left, right))
}

fn wall_width(profile: &GridProfile, sigma: f64, order: Vec<usize>, fraction: f64) -> Result<f64> {
    let dev = |i: usize| (profile.theta[i] - sigma).abs();
    let wall = order[0];
    let amplitude = dev(wall);
    if amplitude < 1e-8 {
        return Err(Error::Undefined(
            "no boundary layer: the wall value equals the outer state".into(),
        ));
    }
    let level = fraction * amplitude;
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if dev(j) < level {
            // interpolate the crossing between nodes i and j
            let t = (dev(i) - level) / (dev(i) - dev(j));
            let zi = profile.z[i];
            let zc = zi + t * (profile.z[j] - zi);
            let width = (zc - profile.z[wall]).abs();
            if width >= 1.0 {
                break;
            }
            return Ok(width);
        }
    }
    Err(Error::Undefined(
        "no plateau: the profile never reaches its outer state".into(),
    ))
}

/// Centre transition width: extent of the region where `θ` lies strictly
/// between `σ₁ + fraction·Δ` and `σ₂ − fraction·Δ`, `Δ = σ₂ − σ₁`.
pub fn center_width(
    coeffs: &LeslieCoefficients,
    profile: &GridProfile,
    fraction: f64,
) -> Result<f64> {
    let (ls, rs) = extract_outer_states(coeffs, profile)?;
    let (s1, s2) = (ls.value(coeffs)?, rs.value(coeffs)?);
    let jump = s2 - s1;
    if jump.abs() < 1e-8 {
        return Err(Error::Undefined(
            "no centre transition: equal outer states".into(),
        ));
    }
    // normalized progress across the transition, restricted to |z| < ½
    let progress = |i: usize| (profile.theta[i] - s1) / jump;
    let inner: Vec<usize> = (0..profile.n_points())
        .filter(|&i| profile.z[i].abs() <= 0.5)
        .collect();
    let crossing = |level: f64, forward: bool| -> Option<f64> {
        let idx: Vec<usize> = if forward {
            inner.clone()
        } else {
            inner.iter().rev().copied().collect()
        };
        for w in idx.windows(2) {
            let (i, j) = (w[0], w[1]);
            let (pi, pj) = (progress(i), progress(j));
            let crossed = if forward {
                pi <= level && pj > level
            } else {
                pi >= level && pj < level
            };
            if crossed {
                let t = (level - pi) / (pj - pi);
                return Some(profile.z[i] + t * (profile.z[j] - profile.z[i]));
            }
        }
        None
    };
    match (crossing(fraction, true), crossing(1.0 - fraction, false)) {
        (Some(a), Some(b)) if b > a => Ok(b - a),
        _ => Err(Error::Undefined(
            "centre transition not resolved inside |z| < 1/2".into(),
        )),
    }
}
