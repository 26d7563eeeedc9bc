//! Leslie viscosities, the viscosity functions of the reduced director
//! equation and the physical-validity checks on them.
//!
//! All coefficients are stored after scaling by the fourth Leslie
//! viscosity, so `alpha4` is always `1`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Number of samples of `[0, π]` used by [`LeslieCoefficients::validate`].
pub const VALIDITY_GRID_POINTS: usize = 1000;
/// Slack below which a sampled dissipation determinant counts as nonpositive.
pub const VALIDITY_SLACK: f64 = 1e-12;

/// Dimensionless Leslie viscosities `α₁ … α₆` with `α₄ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeslieCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    #[serde(default = "one")]
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for LeslieCoefficients {
    fn default() -> Self {
        Self::FIVE_CB
    }
}

impl LeslieCoefficients {
    /// Characteristic dimensionless viscosities of 5CB.
    pub const FIVE_CB: Self = Self {
        alpha1: -0.1549,
        alpha2: -0.9859,
        alpha3: -0.0535,
        alpha4: 1.0,
        alpha5: 0.7324,
        alpha6: -0.39,
    };

    /// Builds a coefficient set from raw viscosities, rescaling every entry
    /// by `alpha4` so the stored set has `alpha4 = 1`.
    pub fn from_raw(raw: [f64; 6]) -> Result<Self> {
        let a4 = raw[3];
        if !(a4.is_finite() && a4 > 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "alpha4 must be positive to serve as the viscosity scale, got {a4}"
            )));
        }
        Ok(Self {
            alpha1: raw[0] / a4,
            alpha2: raw[1] / a4,
            alpha3: raw[2] / a4,
            alpha4: 1.0,
            alpha5: raw[4] / a4,
            alpha6: raw[5] / a4,
        })
    }

    /// Re-normalizes a deserialized record so `alpha4 = 1`.
    pub fn normalized(self) -> Result<Self> {
        Self::from_raw([
            self.alpha1,
            self.alpha2,
            self.alpha3,
            self.alpha4,
            self.alpha5,
            self.alpha6,
        ])
    }

    /// Rotational viscosity `γ₁ = α₃ − α₂`.
    pub fn gamma1(&self) -> f64 {
        self.alpha3 - self.alpha2
    }

    /// `γ₂ = α₆ − α₅`.
    pub fn gamma2(&self) -> f64 {
        self.alpha6 - self.alpha5
    }

    /// Violation of the Parodi relation, `α₂ + α₃ − α₆ + α₅`.
    pub fn parodi_residual(&self) -> f64 {
        self.alpha2 + self.alpha3 - self.alpha6 + self.alpha5
    }

    /// `m(θ) = α₂cos²θ − α₃sin²θ`.
    #[inline]
    pub fn m(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.alpha2 * c * c - self.alpha3 * s * s
    }

    /// `m′(θ) = −(α₂ + α₃) sin 2θ`.
    #[inline]
    pub fn m_prime(&self, theta: f64) -> f64 {
        -(self.alpha2 + self.alpha3) * (2.0 * theta).sin()
    }

    /// `g(θ) = α₁cos²θ sin²θ + ½[(α₅−α₂)cos²θ + (α₃+α₆)sin²θ + α₄]`.
    #[inline]
    pub fn g(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let (c2, s2) = (c * c, s * s);
        self.alpha1 * c2 * s2
            + 0.5
                * ((self.alpha5 - self.alpha2) * c2
                    + (self.alpha3 + self.alpha6) * s2
                    + self.alpha4)
    }

    #[inline]
    pub fn g_prime(&self, theta: f64) -> f64 {
        0.5 * self.alpha1 * (4.0 * theta).sin()
            + 0.5 * (self.alpha3 + self.alpha6 - self.alpha5 + self.alpha2) * (2.0 * theta).sin()
    }

    /// `Q(θ) = −m(θ)/g(θ)`. No positivity check; see [`Self::checked_q`].
    #[inline]
    pub fn q(&self, theta: f64) -> f64 {
        -self.m(theta) / self.g(theta)
    }

    /// `Q′(θ)`, by the quotient rule on the analytic derivatives.
    #[inline]
    pub fn q_prime(&self, theta: f64) -> f64 {
        let g = self.g(theta);
        -(self.m_prime(theta) * g - self.m(theta) * self.g_prime(theta)) / (g * g)
    }

    pub fn checked_q(&self, theta: f64) -> Result<f64> {
        let g = self.g(theta);
        if g <= 0.0 {
            return Err(Error::InvalidCoefficients(format!(
                "g({theta}) = {g} is not positive"
            )));
        }
        Ok(-self.m(theta) / g)
    }

    /// Dissipation determinant `γ₁g(θ) − m(θ)²`; the factor multiplying `θ_t`.
    #[inline]
    pub fn relaxation(&self, theta: f64) -> f64 {
        let m = self.m(theta);
        self.gamma1() * self.g(theta) - m * m
    }

    /// Linearized diffusivity `F(θ) = g/(γ₁g − m²)`. No positivity check.
    #[inline]
    pub fn f(&self, theta: f64) -> f64 {
        self.g(theta) / self.relaxation(theta)
    }

    pub fn checked_f(&self, theta: f64) -> Result<f64> {
        let den = self.relaxation(theta);
        if den <= 0.0 {
            return Err(Error::InvalidCoefficients(format!(
                "γ₁g − m² = {den} is not positive at θ = {theta}"
            )));
        }
        Ok(self.g(theta) / den)
    }

    /// The flow-aligning angle `arctan √(α₂/α₃)`, where `m` vanishes.
    pub fn flow_alignment_angle(&self) -> Result<f64> {
        let ratio = self.alpha2 / self.alpha3;
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "alpha2/alpha3 = {ratio} must be positive for a flow-aligning angle"
            )));
        }
        Ok(ratio.sqrt().atan())
    }

    /// Scans `[0, π]` for violations of the dissipation inequalities.
    pub fn validate(&self) -> ValidityReport {
        self.validate_on(VALIDITY_GRID_POINTS, VALIDITY_SLACK)
    }

    pub fn validate_on(&self, points: usize, slack: f64) -> ValidityReport {
        let points = points.max(2);
        let mut min_g = (f64::INFINITY, 0.0);
        let mut min_det = (f64::INFINITY, 0.0);
        for i in 0..points {
            let theta = PI * i as f64 / (points - 1) as f64;
            let g = self.g(theta);
            let det = self.relaxation(theta);
            if g < min_g.0 {
                min_g = (g, theta);
            }
            if det < min_det.0 {
                min_det = (det, theta);
            }
        }
        let mut failures = Vec::new();
        if min_g.0 <= slack {
            failures.push(format!("g(θ) = {:.6e} ≤ 0 at θ = {:.6}", min_g.0, min_g.1));
        }
        if min_det.0 <= slack {
            failures.push(format!(
                "γ₁g(θ) − m(θ)² = {:.6e} ≤ 0 at θ = {:.6}",
                min_det.0, min_det.1
            ));
        }
        if !(self.alpha2 / self.alpha3 > 0.0) {
            failures.push("alpha2/alpha3 ≤ 0: no flow-aligning angle".to_string());
        }
        let parodi = self.parodi_residual();
        let mut warnings = Vec::new();
        if parodi.abs() > slack {
            warnings.push(format!("Parodi relation violated by {parodi:.6}"));
        }
        ValidityReport {
            min_g: min_g.0,
            min_g_at: min_g.1,
            min_dissipation: min_det.0,
            min_dissipation_at: min_det.1,
            parodi_residual: parodi,
            failures,
            warnings,
        }
    }
}

/// Outcome of [`LeslieCoefficients::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub min_g: f64,
    pub min_g_at: f64,
    pub min_dissipation: f64,
    pub min_dissipation_at: f64,
    pub parodi_residual: f64,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Dimensional inputs: elastic constant `K` (N), anchoring strength `A`
/// (N/m), channel half-depth `h` (m) and pressure gradient `G` (N/m³).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalScales {
    pub k: f64,
    pub a: f64,
    pub h: f64,
    pub g: f64,
}

impl DimensionalScales {
    /// Returns `(𝒢, 𝓑) = (h³G/K, 2K/(A h))`.
    ///
    /// `A = +∞` is accepted and gives the strong-anchoring limit `𝓑 = 0`.
    pub fn nondimensionalize(&self) -> Result<(f64, f64)> {
        for (name, v) in [("K", self.k), ("A", self.a), ("h", self.h)] {
            if !(v > 0.0) || v.is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        let pressure = self.h.powi(3) * self.g / self.k;
        let inverse_anchoring = 2.0 * self.k / (self.a * self.h);
        Ok((pressure, inverse_anchoring))
    }
}
