//! Uniform grids over the channel `[−1, 1]` and profiles sampled on them.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default node count: `Δz = 0.0125`.
pub const DEFAULT_NODES: usize = 161;

/// Uniform nodes `lo = x₀ < … < x_{n−1} = hi` with exact endpoints.
pub fn uniform_nodes(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    assert!(n >= 3, "a grid needs at least three nodes");
    let span = hi - lo;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + span * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// θ sampled on a uniform grid over `[−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridProfile {
    pub z: Vec<f64>,
    pub theta: Vec<f64>,
    /// Max-norm of the `Δz²`-scaled discrete residual of the static system
    /// the profile was solved for; `NaN` when it was never solved.
    pub residual_norm: f64,
}

impl GridProfile {
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, f: F) -> Self {
        let z = uniform_nodes(n, -1.0, 1.0);
        let theta = z.iter().map(|&z| f(z)).collect();
        Self {
            z,
            theta,
            residual_norm: f64::NAN,
        }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self::from_fn(n, |_| value)
    }

    /// Builds a profile on the default channel grid from raw values.
    pub fn from_values(theta: Vec<f64>) -> Self {
        let z = uniform_nodes(theta.len(), -1.0, 1.0);
        Self {
            z,
            theta,
            residual_norm: f64::NAN,
        }
    }

    pub fn n_points(&self) -> usize {
        self.theta.len()
    }

    pub fn spacing(&self) -> f64 {
        2.0 / (self.n_points() - 1) as f64
    }

    /// `ω = (θ(1) − θ(−1)) / 2π`.
    pub fn winding_number(&self) -> f64 {
        (self.theta[self.n_points() - 1] - self.theta[0]) / (2.0 * PI)
    }

    /// Piecewise-linear interpolation; clamps outside `[−1, 1]`.
    pub fn interpolate(&self, z: f64) -> f64 {
        let n = self.n_points();
        let s = ((z + 1.0) / self.spacing()).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        self.theta[i] * (1.0 - t) + self.theta[i + 1] * t
    }

    /// Resamples onto a grid of `n` nodes.
    pub fn resample(&self, n: usize) -> Self {
        if n == self.n_points() {
            return self.clone();
        }
        Self::from_fn(n, |z| self.interpolate(z))
    }

    /// Sup-norm distance; the other profile is interpolated if grids differ.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        let same = other.n_points() == self.n_points();
        self.z
            .iter()
            .zip(&self.theta)
            .enumerate()
            .map(|(i, (&z, &t))| {
                let o = if same {
                    other.theta[i]
                } else {
                    other.interpolate(z)
                };
                (t - o).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Discrete `L²(−1, 1)` distance by the trapezoid rule.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        let h = self.spacing();
        let n = self.n_points();
        let same = other.n_points() == n;
        let mut acc = 0.0;
        for i in 0..n {
            let o = if same {
                other.theta[i]
            } else {
                other.interpolate(self.z[i])
            };
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * (self.theta[i] - o).powi(2);
        }
        (acc * h).sqrt()
    }

    /// Returns a copy shifted by `k` half-turns.
    pub fn shifted(&self, k: i32) -> Self {
        Self {
            z: self.z.clone(),
            theta: self.theta.iter().map(|t| t + k as f64 * PI).collect(),
            residual_norm: self.residual_norm,
        }
    }
}

/// Director `n = (sin θ, 0, cos θ)`; `n` and `−n` describe the same state.
pub fn director(theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    [s, 0.0, c]
}

/// Director of `profile` at height `z`, by linear interpolation of θ.
pub fn director_field(profile: &GridProfile, z: f64) -> [f64; 3] {
    director(profile.interpolate(z))
}

/// Whether two directors describe the same physical orientation.
pub fn same_orientation(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    (dot.abs() - 1.0).abs() <= tol
}
