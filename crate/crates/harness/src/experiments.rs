//! Dynamics experiments shared by the sweep commands and figure drivers.

use rayon::prelude::*;
use std::ops::RangeInclusive;

use nematic_core::analytic::Family;
use nematic_core::dynamics::{
    build_catalog, find_critical_t1, BranchId, Catalog, CriticalDelay, CriticalSearch,
    DelayExperiment, RunOutcome, TimeStepperConfig,
};
use nematic_core::statics::ContinuationOptions;

use crate::commands::Context;
use crate::error::{usage, HarnessError, Result};
use crate::output::num;

/// Inverse anchoring at which catalog seeds are built before continuation.
pub const CATALOG_SEED_B: f64 = 0.1;

/// `lo..hi`, inclusive.
pub fn parse_index_range(s: &str) -> Result<RangeInclusive<i32>> {
    let bad = || HarnessError::Usage(format!("index range {s:?} is not lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return usage(format!("index range {s:?} is empty"));
    }
    Ok(lo..=hi)
}

/// Type I catalog at `(𝒢, 𝓑)` on an `n`-node grid.
pub fn catalog(ctx: &Context, g: f64, b: f64, indices: RangeInclusive<i32>, n: usize) -> Catalog {
    let seeds: Vec<BranchId> = indices.map(|i| BranchId::new(Family::TypeI, i)).collect();
    build_catalog(
        &ctx.coeffs,
        g,
        b,
        &seeds,
        CATALOG_SEED_B,
        n,
        &ContinuationOptions::default(),
    )
}

/// Adjacent sweep samples straddling the first run that ends on `upper`.
pub fn sweep_bracket(out: &[RunOutcome], upper: BranchId) -> Option<(f64, f64)> {
    let k = out.iter().position(|o| o.matched == Some(upper))?;
    let prev = out.get(k.checked_sub(1)?)?;
    Some((prev.parameter, out[k].parameter))
}

pub fn search_row(status: &str, s: &CriticalSearch) -> Vec<String> {
    let id = |m: Option<BranchId>| m.map(|m| m.to_string()).unwrap_or_else(|| "none".into());
    vec![
        status.into(),
        num(s.critical),
        num(s.bracket.0),
        num(s.bracket.1),
        id(s.below),
        id(s.above),
        s.runs.to_string(),
    ]
}

pub const DELAY_HEADER: [&str; 9] = [
    "B",
    "C",
    "status",
    "t1_star",
    "bracket_lo",
    "bracket_hi",
    "below",
    "above",
    "runs",
];

/// `t₁*(C)` for each `C`, searched in parallel.
#[allow(clippy::too_many_arguments)]
pub fn delay_search(
    ctx: &Context,
    exp: &DelayExperiment,
    cs: &[f64],
    t_hi: f64,
    upper: BranchId,
    cat: &Catalog,
    cfg: &TimeStepperConfig,
    tol: f64,
) -> Result<Vec<CriticalDelay>> {
    cs.par_iter()
        .map(|&c| {
            find_critical_t1(&ctx.coeffs, c, exp, t_hi, upper, cat, cfg, tol)
                .map_err(HarnessError::from)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn delay_rows(
    ctx: &Context,
    exp: &DelayExperiment,
    cs: &[f64],
    t_hi: f64,
    upper: BranchId,
    cat: &Catalog,
    cfg: &TimeStepperConfig,
    tol: f64,
) -> Result<Vec<Vec<String>>> {
    let found = delay_search(ctx, exp, cs, t_hi, upper, cat, cfg, tol)?;
    Ok(cs
        .iter()
        .zip(found)
        .map(|(&c, r)| {
            let mut row = vec![num(exp.b), num(c)];
            let e = String::new;
            match r {
                CriticalDelay::Found(s) => row.extend(search_row("found", &s)),
                CriticalDelay::AtOnset => row.extend([
                    "at-onset".into(),
                    num(exp.t2),
                    e(),
                    e(),
                    e(),
                    e(),
                    "0".into(),
                ]),
                CriticalDelay::Undefined { probed } => row.extend([
                    "undefined".into(),
                    e(),
                    e(),
                    num(probed),
                    e(),
                    e(),
                    "0".into(),
                ]),
            }
            row
        })
        .collect())
}
