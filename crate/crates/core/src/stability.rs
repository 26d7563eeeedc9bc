//! Linear stability of static equilibria.
//!
//! Perturbations `θ* + Z(z)e^{−λt}` satisfy
//! `λ(γ₁g − m²)Z = −[gZ'' + (g'θ*'' + 𝒢zm')Z]` with
//! `𝓑Z'(±1) = ∓2cos(2θ*(±1))Z(±1)`, so `λ > 0` is stable.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::analytic::Family;
use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;
use crate::numerics::{scan_roots, symmetric_tridiagonal_eigenvalues};
use crate::statics::static_residual;

/// Half-width of the marginal band around `λ = 0`.
pub const TOL_MARGIN: f64 = 1e-8;

/// Largest static residual accepted for an input equilibrium.
pub const RESIDUAL_GATE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl Verdict {
    pub fn from_eigenvalue(lambda0: f64) -> Self {
        if lambda0 > TOL_MARGIN {
            Verdict::Stable
        } else if lambda0 < -TOL_MARGIN {
            Verdict::Unstable
        } else {
            Verdict::Marginal
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Marginal => "marginal",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Discretized,
    Transcendental,
}

/// Eigenvalues follow the `e^{−λt}` convention: `λ > 0` decays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub leading_eigenvalue: f64,
    pub spectrum_prefix: Vec<f64>,
    pub verdict: Verdict,
    pub method: Method,
}

impl StabilityReport {
    fn from_spectrum(spectrum: Vec<f64>, method: Method) -> Self {
        let leading_eigenvalue = spectrum[0];
        Self {
            leading_eigenvalue,
            spectrum_prefix: spectrum,
            verdict: Verdict::from_eigenvalue(leading_eigenvalue),
            method,
        }
    }
}

/// Symmetric tridiagonal form `(diag, off)` of the discretized operator.
///
/// Boundary rows are halved so the stiffness matrix is symmetric against
/// trapezoid mass weights `w_i/F(θ*_i)`; the pencil is then congruence
/// transformed by the inverse square root of the diagonal mass.
pub fn stability_matrix(
    coeffs: &LeslieCoefficients,
    equilibrium: &GridProfile,
    b: f64,
    g: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = equilibrium.n_points();
    let h = equilibrium.spacing();
    let ih2 = 1.0 / (h * h);
    let theta = &equilibrium.theta;
    let potential: Vec<f64> = equilibrium
        .z
        .iter()
        .zip(theta)
        .map(|(&z, &t)| {
            let curvature = g * z * coeffs.q(t);
            (coeffs.g_prime(t) * curvature + g * z * coeffs.m_prime(t)) / coeffs.g(t)
        })
        .collect();
    let mut diag = vec![0.0; n];
    let mut off = vec![-ih2; n - 1];
    let mut mass = vec![0.0; n];
    for i in 0..n {
        mass[i] = 1.0 / coeffs.f(theta[i]);
        diag[i] = 2.0 * ih2 - potential[i];
    }
    let (lo, hi) = if b > 0.0 {
        let beta_l = 2.0 * (2.0 * theta[0]).cos() / b;
        let beta_r = 2.0 * (2.0 * theta[n - 1]).cos() / b;
        diag[0] = ih2 + beta_l / h - 0.5 * potential[0];
        diag[n - 1] = ih2 + beta_r / h - 0.5 * potential[n - 1];
        mass[0] *= 0.5;
        mass[n - 1] *= 0.5;
        (0, n)
    } else {
        // Z vanishes at both walls
        (1, n - 1)
    };
    let diag: Vec<f64> = (lo..hi).map(|i| diag[i] / mass[i]).collect();
    for (i, o) in off.iter_mut().enumerate() {
        *o /= (mass[i] * mass[i + 1]).sqrt();
    }
    let off = off[lo..hi - 1].to_vec();
    (diag, off)
}

/// The `k` smallest eigenvalues of the linearization about `equilibrium`.
pub fn linearized_spectrum(
    coeffs: &LeslieCoefficients,
    equilibrium: &GridProfile,
    b: f64,
    g: f64,
    k: usize,
) -> Result<StabilityReport> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "need at least one eigenvalue".into(),
        ));
    }
    if !(b >= 0.0) || !g.is_finite() || equilibrium.n_points() < 4 {
        return Err(Error::InvalidParameter(format!(
            "bad stability input (B = {b}, G = {g})"
        )));
    }
    let residual = static_residual(coeffs, g, b, equilibrium);
    if !(residual <= RESIDUAL_GATE) {
        return Err(Error::InvalidParameter(format!(
            "profile is not an equilibrium at (G, B) = ({g}, {b}): residual {residual:.3e}"
        )));
    }
    let (diag, off) = stability_matrix(coeffs, equilibrium, b, g);
    if diag.iter().chain(&off).any(|v| !v.is_finite()) {
        return Err(Error::EigenSolver("non-finite operator entries".into()));
    }
    let spectrum = symmetric_tridiagonal_eigenvalues(&diag, &off, k);
    if spectrum.len() < k || spectrum.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenSolver(format!(
            "only {} eigenvalues resolved",
            spectrum.len()
        )));
    }
    Ok(StabilityReport::from_spectrum(
        spectrum,
        Method::Discretized,
    ))
}

/// The `k` smallest positive roots `μ` of
/// `(4 − 𝓑²μ²) sin μ + 4𝓑μ cos μ = 0`, the cleared form of
/// `tan μ = −4𝓑μ/(4 − 𝓑²μ²)`.
pub fn transcendental_roots(b: f64, k: usize) -> Vec<f64> {
    let f = |mu: f64| (4.0 - b * b * mu * mu) * mu.sin() + 4.0 * b * mu * mu.cos();
    // geometric nodes resolve the small root at weak anchoring
    let geometric = (0..=160).map(|j| 1e-8 * 10f64.powf(j as f64 / 20.0));
    let mut hi = (k as f64 + 2.0) * PI;
    loop {
        let steps = ((hi - 1.0) / 0.01).ceil() as usize;
        let uniform = (1..=steps).map(|j| 1.0 + (hi - 1.0) * j as f64 / steps as f64);
        let nodes: Vec<f64> = geometric.clone().chain(uniform).collect();
        let roots = scan_roots(f, &nodes, 1e-15, k);
        if roots.len() >= k || hi > 1e6 {
            return roots;
        }
        hi *= 2.0;
    }
}

/// Eigenvalues `λ = F(0)μ²` from the closed-form relation with `μ = √(λ/F(0))`.
pub fn theta0_eigenvalues(coeffs: &LeslieCoefficients, b: f64, k: usize) -> Vec<f64> {
    let f0 = coeffs.f(0.0);
    transcendental_roots(b, k)
        .into_iter()
        .map(|mu| f0 * mu * mu)
        .collect()
}

/// Spectrum about `θ* ≡ 0` on the channel `[−1, 1]`.
///
/// Modes `cos kz`, `sin kz` give `tan 2k = −4𝓑k/(4 − 𝓑²k²)`, which is the
/// closed-form relation at inverse anchoring `𝓑/2` with `μ = 2k`.
pub fn channel_theta0_eigenvalues(
    coeffs: &LeslieCoefficients,
    b: f64,
    k: usize,
) -> StabilityReport {
    let f0 = coeffs.f(0.0);
    let spectrum = transcendental_roots(b / 2.0, k)
        .into_iter()
        .map(|mu| 0.25 * f0 * mu * mu)
        .collect();
    StabilityReport::from_spectrum(spectrum, Method::Transcendental)
}

/// Expected verdict of a `𝒢 = 0` equilibrium from its family and label.
pub fn classify_parity(family: Family, index: i32) -> Verdict {
    let even = index % 2 == 0;
    match family {
        Family::TypeI if even => Verdict::Stable,
        Family::TypeII if !even => Verdict::Stable,
        _ => Verdict::Unstable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::equilibrium;
    use crate::grid::DEFAULT_NODES;

    const C: LeslieCoefficients = LeslieCoefficients::FIVE_CB;

    #[test]
    fn verdict_boundaries() {
        assert_eq!(Verdict::from_eigenvalue(1e-7), Verdict::Stable);
        assert_eq!(Verdict::from_eigenvalue(-1e-7), Verdict::Unstable);
        assert_eq!(Verdict::from_eigenvalue(1e-9), Verdict::Marginal);
    }

    #[test]
    fn strong_anchoring_roots() {
        let l = theta0_eigenvalues(&C, 0.0, 3);
        let f0 = C.f(0.0);
        for (j, v) in l.iter().enumerate() {
            let k = (j + 1) as f64;
            assert!((v - f0 * k * k * PI * PI).abs() < 1e-9 * v);
        }
        assert!((l[0] - 45.44).abs() < 0.01);
    }

    #[test]
    fn weak_anchoring_relaxation_mode() {
        let f0 = C.f(0.0);
        for b in [1e3, 1e4] {
            let l = theta0_eigenvalues(&C, b, 2);
            assert!(l.iter().all(|v| *v > 0.0));
            // small-μ expansion gives λ𝓑 → 4F(0)
            assert!(
                (l[0] * b / (4.0 * f0) - 1.0).abs() < 5.0 / b,
                "b = {b}: {}",
                l[0] * b
            );
        }
    }

    #[test]
    fn roots_satisfy_relation() {
        for b in [0.1, 0.5, 2.0, 2.0 / 3.0] {
            for mu in transcendental_roots(b, 5) {
                let lhs = (4.0 - b * b * mu * mu) * mu.sin() + 4.0 * b * mu * mu.cos();
                assert!(lhs.abs() < 1e-10 * (1.0 + b * b * mu * mu), "b={b} mu={mu}");
            }
        }
    }

    #[test]
    fn trivial_state_matches_channel_modes() {
        let p = GridProfile::constant(801, 0.0);
        let disc = linearized_spectrum(&C, &p, 0.5, 0.0, 3).unwrap();
        let exact = channel_theta0_eigenvalues(&C, 0.5, 3);
        for (a, e) in disc.spectrum_prefix.iter().zip(&exact.spectrum_prefix) {
            assert!(((a - e) / e).abs() < 1e-4, "{a} vs {e}");
        }
        assert_eq!(disc.verdict, Verdict::Stable);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(classify_parity(Family::TypeI, 0), Verdict::Stable);
        assert_eq!(classify_parity(Family::TypeII, 0), Verdict::Unstable);
        assert_eq!(classify_parity(Family::TypeII, -3), Verdict::Stable);
        assert_eq!(classify_parity(Family::TypeIII, 2), Verdict::Unstable);
    }

    #[test]
    fn odd_type1_and_odd_type2() {
        let b = 0.3;
        let a1 = equilibrium(Family::TypeI, 1, b)
            .unwrap()
            .profile(DEFAULT_NODES);
        assert!(
            linearized_spectrum(&C, &a1, b, 0.0, 1)
                .unwrap()
                .leading_eigenvalue
                < 0.0
        );
        let t1 = equilibrium(Family::TypeII, 1, b)
            .unwrap()
            .profile(DEFAULT_NODES);
        assert!(
            linearized_spectrum(&C, &t1, b, 0.0, 1)
                .unwrap()
                .leading_eigenvalue
                > 0.0
        );
    }

    #[test]
    fn rejects_non_equilibria() {
        let p = GridProfile::from_fn(DEFAULT_NODES, |z| 0.3 * z);
        assert!(linearized_spectrum(&C, &p, 0.5, 0.0, 1).is_err());
        assert!(linearized_spectrum(&C, &GridProfile::constant(11, 0.0), 0.5, 0.0, 0).is_err());
    }
}
