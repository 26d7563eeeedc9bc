//! Natural-parameter continuation of equilibria in `𝒢` or `𝓑`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::analytic::{AnalyticEquilibrium, Family};
use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;

use super::bvp::NewtonOptions;
use super::equilibrium::solve_equilibrium_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    Fold,
    Bound,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parameter {
    G,
    B,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::G => "G",
            Parameter::B => "B",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub g: f64,
    pub b: f64,
    pub profile: GridProfile,
    pub omega: f64,
    /// Leading eigenvalue, filled in on demand.
    pub lambda0: Option<f64>,
}

impl BranchPoint {
    pub fn new(g: f64, b: f64, profile: GridProfile) -> Self {
        let omega = profile.winding_number();
        Self {
            g,
            b,
            profile,
            omega,
            lambda0: None,
        }
    }

    pub fn parameter(&self, p: Parameter) -> f64 {
        match p {
            Parameter::G => self.g,
            Parameter::B => self.b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub family: Family,
    pub index: i32,
    pub parameter: Parameter,
    pub points: Vec<BranchPoint>,
    pub terminated_by: Termination,
}

impl Branch {
    pub fn last(&self) -> &BranchPoint {
        self.points.last().expect("branches are never empty")
    }

    /// Point whose continuation parameter equals `value` to within `1e-12`.
    pub fn at(&self, value: f64) -> Option<&BranchPoint> {
        self.points
            .iter()
            .find(|p| (p.parameter(self.parameter) - value).abs() <= 1e-12 * value.abs().max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Step multiplier after an accepted step.
    pub growth: f64,
    /// Largest sup-norm profile change accepted in one step (radians).
    pub max_profile_jump: f64,
    /// Largest winding-number change accepted in one step.
    pub max_omega_jump: f64,
    pub newton: NewtonOptions,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            min_step: 1e-6,
            max_step: 10.0,
            growth: 1.5,
            max_profile_jump: 0.5,
            max_omega_jump: 0.25,
            newton: NewtonOptions::default(),
        }
    }
}

/// A branch that stopped short of its targets.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationFailure {
    /// Every point converged before the failure.
    pub branch: Branch,
    pub error: Error,
}

impl fmt::Display for ContinuationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} points converged)",
            self.error,
            self.branch.points.len()
        )
    }
}

impl std::error::Error for ContinuationFailure {}

impl From<Box<ContinuationFailure>> for Error {
    fn from(f: Box<ContinuationFailure>) -> Self {
        f.error
    }
}

pub type ContinuationResult = std::result::Result<Branch, Box<ContinuationFailure>>;

/// Solves the seed's linear profile at `𝒢 = 0` on an `n`-node grid.
pub fn seed_point(
    coeffs: &LeslieCoefficients,
    seed: &AnalyticEquilibrium,
    b: f64,
    n: usize,
) -> Result<BranchPoint> {
    let guess = seed.profile(n);
    let profile = solve_equilibrium_with(coeffs, 0.0, b, &guess, &NewtonOptions::default())?;
    if profile.sup_distance(&guess) > 1e-6 {
        return Err(Error::Undefined(format!(
            "seed {}:{} does not solve the static problem at B = {b}",
            seed.family, seed.index
        )));
    }
    Ok(BranchPoint::new(0.0, b, profile))
}

/// Continues `start` through `targets` in `𝒢` at fixed `𝓑`.
pub fn continue_in_g(
    coeffs: &LeslieCoefficients,
    family: Family,
    index: i32,
    start: &BranchPoint,
    targets: &[f64],
    opts: &ContinuationOptions,
) -> ContinuationResult {
    march(coeffs, family, index, Parameter::G, start, targets, opts)
}

/// Continues `start` through `targets` in `𝓑` at fixed `𝒢`.
pub fn continue_in_b(
    coeffs: &LeslieCoefficients,
    family: Family,
    index: i32,
    start: &BranchPoint,
    targets: &[f64],
    opts: &ContinuationOptions,
) -> ContinuationResult {
    march(coeffs, family, index, Parameter::B, start, targets, opts)
}

/// Builds the `𝒢 = 0` seed and continues it in `𝒢` at fixed `𝓑`.
pub fn continue_seed_in_g(
    coeffs: &LeslieCoefficients,
    seed: &AnalyticEquilibrium,
    b: f64,
    targets: &[f64],
    n: usize,
    opts: &ContinuationOptions,
) -> ContinuationResult {
    let start = seed_point(coeffs, seed, b, n).map_err(|error| {
        Box::new(ContinuationFailure {
            branch: Branch {
                family: seed.family,
                index: seed.index,
                parameter: Parameter::G,
                points: Vec::new(),
                terminated_by: Termination::Bound,
            },
            error,
        })
    })?;
    continue_in_g(coeffs, seed.family, seed.index, &start, targets, opts)
}

/// One accepted step attempt: solve at `value` from the predictor, then
/// apply the jump guard against `prev`.
pub(crate) fn try_step(
    coeffs: &LeslieCoefficients,
    param: Parameter,
    prev: &BranchPoint,
    before: Option<&BranchPoint>,
    value: f64,
    opts: &ContinuationOptions,
) -> Option<BranchPoint> {
    let (g, b) = match param {
        Parameter::G => (value, prev.b),
        Parameter::B => (prev.g, value),
    };
    let mut guesses = Vec::with_capacity(2);
    if let Some(q) = before {
        // secant predictor through the last two points
        let dp = prev.parameter(param) - q.parameter(param);
        if dp.abs() > 0.0 {
            let s = (value - prev.parameter(param)) / dp;
            let theta = prev
                .profile
                .theta
                .iter()
                .zip(&q.profile.theta)
                .map(|(a, c)| a + s * (a - c))
                .collect();
            guesses.push(GridProfile::from_values(theta));
        }
    }
    guesses.push(prev.profile.clone());
    for guess in guesses {
        let Ok(profile) = solve_equilibrium_with(coeffs, g, b, &guess, &opts.newton) else {
            continue;
        };
        let candidate = BranchPoint::new(g, b, profile);
        if candidate.profile.sup_distance(&prev.profile) <= opts.max_profile_jump
            && (candidate.omega - prev.omega).abs() <= opts.max_omega_jump
        {
            return Some(candidate);
        }
    }
    None
}

fn march(
    coeffs: &LeslieCoefficients,
    family: Family,
    index: i32,
    param: Parameter,
    start: &BranchPoint,
    targets: &[f64],
    opts: &ContinuationOptions,
) -> ContinuationResult {
    let mut branch = Branch {
        family,
        index,
        parameter: param,
        points: vec![start.clone()],
        terminated_by: Termination::Open,
    };
    let fail = |branch: Branch, error: Error| Err(Box::new(ContinuationFailure { branch, error }));
    let origin = start.parameter(param);
    let offsets: Vec<f64> = targets.iter().map(|t| t - origin).collect();
    let bad = targets
        .iter()
        .any(|t| !t.is_finite() || (param == Parameter::B && *t < 0.0))
        || offsets
            .windows(2)
            .any(|w| w[0] * w[1] < 0.0 || w[1].abs() < w[0].abs());
    if bad {
        return fail(
            branch,
            Error::InvalidParameter(format!(
                "{param} targets must be finite and move monotonically away from {origin}"
            )),
        );
    }
    let mut step = opts.initial_step;
    for &target in targets {
        loop {
            let here = branch.last().parameter(param);
            if here == target {
                break;
            }
            let dir = (target - here).signum();
            let delta = step.min((target - here).abs());
            let value = if delta == (target - here).abs() {
                target
            } else {
                here + dir * delta
            };
            let n = branch.points.len();
            let before = if n >= 2 {
                Some(&branch.points[n - 2])
            } else {
                None
            };
            match try_step(coeffs, param, &branch.points[n - 1], before, value, opts) {
                Some(p) => {
                    branch.points.push(p);
                    step = (step * opts.growth).min(opts.max_step);
                }
                None => {
                    step *= 0.5;
                    if step < opts.min_step {
                        branch.terminated_by = Termination::Fold;
                        return fail(
                            branch,
                            Error::Unreachable {
                                parameter: param.name(),
                                target,
                                reached: here,
                            },
                        );
                    }
                }
            }
        }
    }
    branch.terminated_by = Termination::Bound;
    Ok(branch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::equilibrium;
    use crate::grid::DEFAULT_NODES;

    const C: LeslieCoefficients = LeslieCoefficients::FIVE_CB;

    #[test]
    fn zero_target_returns_seed() {
        let seed = AnalyticEquilibrium::trivial();
        let br =
            continue_seed_in_g(&C, &seed, 0.4, &[0.0], DEFAULT_NODES, &Default::default()).unwrap();
        assert_eq!(br.points.len(), 1);
        assert!(br.points[0].profile.theta.iter().all(|t| *t == 0.0));
    }

    #[test]
    fn constant_branch_in_b() {
        let start = BranchPoint::new(0.0, 0.1, GridProfile::constant(DEFAULT_NODES, 0.0));
        let br = continue_in_b(
            &C,
            Family::TypeI,
            0,
            &start,
            &[0.5, 1.0, 3.0],
            &Default::default(),
        )
        .unwrap();
        for b in [0.5, 1.0, 3.0] {
            assert!(br
                .at(b)
                .unwrap()
                .profile
                .theta
                .iter()
                .all(|t| t.abs() < 1e-14));
        }
    }

    #[test]
    fn a0_branch_is_odd() {
        let seed = AnalyticEquilibrium::trivial();
        let br = continue_seed_in_g(
            &C,
            &seed,
            1.0 / 3.0,
            &[0.1, 2.0, 5.0],
            DEFAULT_NODES,
            &Default::default(),
        )
        .unwrap();
        let p = &br.at(5.0).unwrap().profile;
        let n = p.n_points();
        for i in 0..n {
            assert!((p.theta[i] + p.theta[n - 1 - i]).abs() < 1e-9);
        }
        assert!(br.points.windows(2).all(|w| w[1].g > w[0].g));
        assert!(br.points.iter().all(|q| q.profile.residual_norm < 1e-10));
    }

    #[test]
    fn fold_stops_type1_branch() {
        let seed = equilibrium(Family::TypeI, 2, 0.3).unwrap();
        let start = seed_point(&C, &seed, 0.3, DEFAULT_NODES).unwrap();
        let err =
            continue_in_b(&C, Family::TypeI, 2, &start, &[0.5], &Default::default()).unwrap_err();
        let Error::Unreachable { reached, .. } = err.error else {
            panic!("unexpected {:?}", err.error);
        };
        assert!((reached - 0.4345).abs() < 2e-3, "reached {reached}");
        assert!(err.branch.points.len() > 1);
    }

    #[test]
    fn rejects_non_monotone_targets() {
        let start = BranchPoint::new(0.0, 0.1, GridProfile::constant(DEFAULT_NODES, 0.0));
        assert!(continue_in_g(
            &C,
            Family::TypeI,
            0,
            &start,
            &[1.0, 0.5],
            &Default::default()
        )
        .is_err());
    }
}
