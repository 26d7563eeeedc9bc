//! Static equilibria `g(θ)θ'' + 𝒢zm(θ) = 0`, `𝓑θ'(±1) = ∓sin 2θ(±1)`.

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;

use super::bvp::{Bvp, EndCondition, NewtonOptions};

fn lower_wall(t: f64) -> (f64, f64) {
    ((2.0 * t).sin(), 2.0 * (2.0 * t).cos())
}

fn upper_wall(t: f64) -> (f64, f64) {
    (-(2.0 * t).sin(), -2.0 * (2.0 * t).cos())
}

fn check_parameters(g: f64, b: f64) -> Result<()> {
    if !g.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "pressure gradient must be finite, got {g}"
        )));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "inverse anchoring must be finite and nonnegative, got {b}"
        )));
    }
    Ok(())
}

fn with_problem<T>(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    z: &[f64],
    run: impl FnOnce(&Bvp<'_>) -> T,
) -> T {
    let f = |zi: f64, t: f64| (g * zi * coeffs.q(t), g * zi * coeffs.q_prime(t));
    let bvp = Bvp {
        z,
        f: &f,
        left: EndCondition::Robin {
            weight: b,
            psi: &lower_wall,
        },
        right: EndCondition::Robin {
            weight: b,
            psi: &upper_wall,
        },
    };
    run(&bvp)
}

/// Newton solve from `guess`, on the guess's grid.
pub fn solve_equilibrium(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    guess: &GridProfile,
) -> Result<GridProfile> {
    solve_equilibrium_with(coeffs, g, b, guess, &NewtonOptions::default())
}

pub fn solve_equilibrium_with(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    guess: &GridProfile,
    opts: &NewtonOptions,
) -> Result<GridProfile> {
    check_parameters(g, b)?;
    let sol = with_problem(coeffs, g, b, &guess.z, |bvp| bvp.solve(&guess.theta, opts))?;
    let mut out = GridProfile::from_values(sol.theta);
    out.residual_norm = sol.residual_norm;
    Ok(out)
}

/// Scaled residual of `profile` re-evaluated at `(𝒢, 𝓑)`.
pub fn static_residual(coeffs: &LeslieCoefficients, g: f64, b: f64, profile: &GridProfile) -> f64 {
    with_problem(coeffs, g, b, &profile.z, |bvp| {
        bvp.residual_norm(&profile.theta)
    })
}
