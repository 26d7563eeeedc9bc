//! First-order correction `θ = θ*ₐ + 𝒢θ⁽¹⁾ + O(𝒢²)` about a linear base.

use serde::Serialize;

use crate::analytic::{AnalyticEquilibrium, Family};
use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;
use crate::numerics::adaptive_simpson;

/// Absolute tolerance of the inner and outer quadratures.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallGCorrection {
    pub base: AnalyticEquilibrium,
    pub inverse_anchoring: f64,
    /// `θ⁽¹⁾` sampled on the output grid.
    pub theta1: GridProfile,
    pub c: f64,
    pub d: f64,
    /// `I(−1)`, `I(1)`.
    pub i_ends: (f64, f64),
    /// `J(−1)`, `J(1)`.
    pub j_ends: (f64, f64),
}

impl SmallGCorrection {
    /// `θ*ₐ + 𝒢θ⁽¹⁾` on the correction's grid.
    pub fn composite(&self, g: f64) -> GridProfile {
        let theta = self
            .theta1
            .z
            .iter()
            .zip(&self.theta1.theta)
            .map(|(&z, &t1)| self.base.theta(z) + g * t1)
            .collect();
        GridProfile::from_values(theta)
    }
}

struct Integrals<'a> {
    coeffs: &'a LeslieCoefficients,
    a: f64,
    b: f64,
}

impl Integrals<'_> {
    /// `I(r) = ∫₀^r sQ(as + b) ds`.
    fn i(&self, r: f64) -> f64 {
        adaptive_simpson(
            &|s: f64| s * self.coeffs.q(self.a * s + self.b),
            0.0,
            r,
            0.1 * QUADRATURE_TOL,
        )
    }

    /// `J(z) = ∫₀^z I(r) dr`.
    fn j(&self, z: f64) -> f64 {
        adaptive_simpson(&|r: f64| self.i(r), 0.0, z, QUADRATURE_TOL)
    }
}

/// Builds `θ⁽¹⁾ = J(z) + Cz + D` on an `n`-node grid.
pub fn small_g_correction(
    coeffs: &LeslieCoefficients,
    base: &AnalyticEquilibrium,
    inverse_anchoring: f64,
    n: usize,
) -> Result<SmallGCorrection> {
    let k = match base.family {
        Family::TypeI => 0,
        Family::TypeII => 1,
        f => {
            return Err(Error::InvalidParameter(format!(
                "no first-order correction for Type {f} bases"
            )))
        }
    };
    if !(inverse_anchoring > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse anchoring must be positive, got {inverse_anchoring}"
        )));
    }
    let a = base.slope;
    let cos2a = (2.0 * a).cos();
    if cos2a.abs() < 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "cos(2a) vanishes for slope {a}; the constant D is undefined"
        )));
    }
    let ints = Integrals {
        coeffs,
        a,
        b: base.intercept,
    };
    let sign = if k == 0 { 1.0 } else { -1.0 };
    let cw = sign * cos2a;
    let bb = inverse_anchoring;
    let (im, ip) = (ints.i(-1.0), ints.i(1.0));
    let (jm, jp) = (ints.j(-1.0), ints.j(1.0));
    let c = (2.0 * cw * (jm - jp) - bb * (ip + im)) / (2.0 * bb + 4.0 * cw);
    let d = -0.5 * (jp + jm) + bb * sign * (im - ip) / (4.0 * cos2a);
    let theta1 = GridProfile::from_fn(n, |z| ints.j(z) + c * z + d);
    Ok(SmallGCorrection {
        base: *base,
        inverse_anchoring,
        theta1,
        c,
        d,
        i_ends: (im, ip),
        j_ends: (jm, jp),
    })
}
