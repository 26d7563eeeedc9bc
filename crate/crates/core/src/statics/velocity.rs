//! Steady channel velocity from an equilibrium profile.

use crate::coefficients::LeslieCoefficients;
use crate::grid::GridProfile;

/// Velocity `u(z) = −𝒢∫_{−1}^{z} s/g(θ(s)) ds` in units of `K/(α₄h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityProfile {
    pub z: Vec<f64>,
    pub u: Vec<f64>,
}

impl VelocityProfile {
    /// `u(1)`; vanishes when `g(θ(z))` is even in `z`.
    pub fn upper_wall_slip(&self) -> f64 {
        *self.u.last().unwrap()
    }
}

/// Trapezoid-rule quadrature of the steady momentum balance.
pub fn reconstruct_velocity(
    coeffs: &LeslieCoefficients,
    profile: &GridProfile,
    g: f64,
) -> VelocityProfile {
    let integrand: Vec<f64> = profile
        .z
        .iter()
        .zip(&profile.theta)
        .map(|(&z, &t)| z / coeffs.g(t))
        .collect();
    let h = profile.spacing();
    let mut u = Vec::with_capacity(integrand.len());
    let mut acc = 0.0;
    u.push(0.0);
    for w in integrand.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        u.push(-g * acc);
    }
    VelocityProfile {
        z: profile.z.clone(),
        u,
    }
}
