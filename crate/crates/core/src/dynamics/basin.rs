//! Basin boundaries in the initial slope and in the pressure delay.

use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};

use super::matching::{match_steady_state, BranchId, Catalog, DEFAULT_MATCH_THRESHOLD};
use super::schedule::{Anchoring, Pressure, Schedule};
use super::stepper::{evolve, make_initial, InitialKind, TimeStepperConfig, TrajectoryResult};

/// Outcome of one run from `Θ = Cz`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutcome {
    pub parameter: f64,
    pub matched: Option<BranchId>,
    pub omega: f64,
    pub t_steady: Option<f64>,
    pub converged: bool,
}

fn outcome(parameter: f64, run: &TrajectoryResult, catalog: &Catalog) -> Result<RunOutcome> {
    let matched = if run.converged {
        match_steady_state(&run.final_profile, catalog, DEFAULT_MATCH_THRESHOLD)?.map(|m| m.id)
    } else {
        None
    };
    Ok(RunOutcome {
        parameter,
        matched,
        omega: run.final_omega,
        t_steady: run.t_steady,
        converged: run.converged,
    })
}

/// Runs `Θ = Cz` under `schedule` and identifies the final state.
pub fn run_linear(
    coeffs: &LeslieCoefficients,
    c: f64,
    schedule: &Schedule,
    catalog: &Catalog,
    cfg: &TimeStepperConfig,
) -> Result<RunOutcome> {
    let init = make_initial(InitialKind::Linear, c, cfg.nodes()?);
    let run = evolve(coeffs, &init, schedule, cfg)?;
    outcome(c, &run, catalog)
}

/// Final states for `Θ = Cz` at constant `(𝒢, 𝓑)` over `cs`, in parallel
/// and in input order.
pub fn sweep_initial_slope(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    cs: &[f64],
    catalog: &Catalog,
    cfg: &TimeStepperConfig,
) -> Result<Vec<RunOutcome>> {
    let schedule = Schedule::constant(g, b);
    cs.par_iter()
        .map(|&c| run_linear(coeffs, c, &schedule, catalog, cfg))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSearch {
    pub critical: f64,
    /// Final bracket `(below, above)`.
    pub bracket: (f64, f64),
    pub below: Option<BranchId>,
    pub above: Option<BranchId>,
    pub runs: usize,
}

/// Bisects `[lo, hi]` on `is_upper(outcome)`, which must be false at `lo`
/// and true at `hi`.
fn bisect_outcome(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    run: impl Fn(f64) -> Result<RunOutcome>,
    is_upper: impl Fn(&RunOutcome) -> bool,
) -> Result<CriticalSearch> {
    let a = run(lo)?;
    let b = run(hi)?;
    if is_upper(&a) == is_upper(&b) {
        return Err(Error::IdenticalOutcomes(format!(
            "both ends of [{lo}, {hi}] reach {:?}",
            a.matched.map(|m| m.to_string())
        )));
    }
    if is_upper(&a) {
        return Err(Error::InvalidParameter(format!(
            "the lower end {lo} already gives the upper outcome"
        )));
    }
    let (mut below, mut above) = (a.matched, b.matched);
    let mut runs = 2;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let r = run(mid)?;
        runs += 1;
        if is_upper(&r) {
            hi = mid;
            above = r.matched;
        } else {
            lo = mid;
            below = r.matched;
        }
    }
    Ok(CriticalSearch {
        critical: hi,
        bracket: (lo, hi),
        below,
        above,
        runs,
    })
}

/// `C*`: smallest `C` in the bracket whose run ends on `upper` (the
/// `a₀` branch in the reference case), to within `tol`.
#[allow(clippy::too_many_arguments)]
pub fn find_critical_c(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    bracket: (f64, f64),
    upper: BranchId,
    catalog: &Catalog,
    cfg: &TimeStepperConfig,
    tol: f64,
) -> Result<CriticalSearch> {
    let schedule = Schedule::constant(g, b);
    bisect_outcome(
        bracket.0,
        bracket.1,
        tol,
        |c| run_linear(coeffs, c, &schedule, catalog, cfg),
        |o| o.matched == Some(upper),
    )
}

/// Ramp parameters of a delayed-pressure experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayExperiment {
    pub g_bar: f64,
    pub delta: f64,
    pub kappa: f64,
    pub t2: f64,
    pub b: f64,
}

impl DelayExperiment {
    pub fn schedule(&self, c: f64, t1: f64) -> Schedule {
        Schedule {
            pressure: Pressure::Ramp {
                g_bar: self.g_bar,
                delta: self.delta,
                t1,
            },
            anchoring: Anchoring::Ramp {
                c,
                kappa: self.kappa,
                t2: self.t2,
                b: self.b,
            },
            literal_lower_flux: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CriticalDelay {
    /// `t₁*` and the search record.
    Found(CriticalSearch),
    /// Already `upper` at `t₁ = t₂`.
    AtOnset,
    /// Still not `upper` at the largest probed delay.
    Undefined { probed: f64 },
}

/// `t₁*(C)` on `[t₂, t_hi]`: the smallest delay whose run ends on `upper`.
#[allow(clippy::too_many_arguments)]
pub fn find_critical_t1(
    coeffs: &LeslieCoefficients,
    c: f64,
    exp: &DelayExperiment,
    t_hi: f64,
    upper: BranchId,
    catalog: &Catalog,
    cfg: &TimeStepperConfig,
    tol: f64,
) -> Result<CriticalDelay> {
    let run = |t1: f64| run_linear(coeffs, c, &exp.schedule(c, t1), catalog, cfg);
    let is_upper = |o: &RunOutcome| o.matched == Some(upper);
    let at_onset = run(exp.t2)?;
    if is_upper(&at_onset) {
        return Ok(CriticalDelay::AtOnset);
    }
    let late = run(t_hi)?;
    if !is_upper(&late) {
        return Ok(CriticalDelay::Undefined { probed: t_hi });
    }
    bisect_outcome(exp.t2, t_hi, tol, run, is_upper).map(CriticalDelay::Found)
}

/// `C*` of a delayed experiment at zero delay (`t₁ = t₂`): the smallest `C`
/// in the bracket whose ramped run ends on `upper`.
pub fn find_critical_c_at_onset(
    coeffs: &LeslieCoefficients,
    exp: &DelayExperiment,
    bracket: (f64, f64),
    upper: BranchId,
    catalog: &Catalog,
    cfg: &TimeStepperConfig,
    tol: f64,
) -> Result<CriticalSearch> {
    bisect_outcome(
        bracket.0,
        bracket.1,
        tol,
        |c| run_linear(coeffs, c, &exp.schedule(c, exp.t2), catalog, cfg),
        |o| o.matched == Some(upper),
    )
}
