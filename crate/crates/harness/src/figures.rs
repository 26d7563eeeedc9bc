//! Figure datasets: each driver writes `data.csv` with columns
//! `x, y, series, flag`, plus optional side tables.

use rayon::prelude::*;
use std::f64::consts::PI;
use std::path::PathBuf;

use nematic_core::analytic::{
    critical_inverse_anchoring, enumerate_equilibria, equilibrium, Family, DEFAULT_A_MAX,
};
use nematic_core::asymptotics::{
    composite_large_g, extract_outer_states, large_g::DEFAULT_LAYER_NODES, small_g_correction,
};
use nematic_core::dynamics::{
    find_critical_c, find_critical_c_at_onset, sweep_initial_slope, BranchId, Catalog,
    CriticalDelay, CriticalSearch, DelayExperiment, RunOutcome, TimeStepperConfig,
};
use nematic_core::grid::director;
use nematic_core::stability::linearized_spectrum;
use nematic_core::statics::{continue_seed_in_g, fold_curve, ContinuationOptions, FoldOptions};
use nematic_core::{Error, GridProfile};

use crate::cli::{Command, ContinueArgs, FigureArgs, FigureId, ParamName, StabilityArgs};
use crate::commands::{execute_upstream, Context};
use crate::database::BranchDatabase;
use crate::error::Result;
use crate::experiments::{catalog, delay_search, sweep_bracket};
use crate::output::{num, opt_num, Run, Table};

struct Data(Table);

impl Data {
    fn new() -> Self {
        Data(Table::new(&["x", "y", "series", "flag"]))
    }

    fn push(&mut self, x: f64, y: Option<f64>, series: impl Into<String>, flag: impl Into<String>) {
        self.0
            .push(vec![num(x), opt_num(y), series.into(), flag.into()]);
    }

    fn profile(&mut self, p: &GridProfile, series: &str, flag: &str) {
        for (z, t) in p.z.iter().zip(&p.theta) {
            self.push(*z, Some(*t), series, flag);
        }
    }
}

pub fn reproduce(ctx: &Context, a: &FigureArgs, run: &mut Run) -> Result<()> {
    let mut data = Data::new();
    match a.id {
        FigureId::Fig2 => omega_landscape(ctx, a, Family::TypeI, &mut data)?,
        FigureId::Fig3 => omega_landscape(ctx, a, Family::TypeII, &mut data)?,
        FigureId::Fig4 => small_g(ctx, Family::TypeI, 0, &mut data)?,
        FigureId::Fig5 => small_g(ctx, Family::TypeII, 1, &mut data)?,
        FigureId::Fig6 => large_g(ctx, &mut data)?,
        FigureId::Fig7Landscape => slope_intercept_landscape(ctx, &mut data)?,
        FigureId::Fig8 => fold_curves(ctx, &mut data)?,
        FigureId::Fig7Winding => winding_staircase(ctx, &mut data)?,
        FigureId::Fig9 => critical_profiles(ctx, &mut data)?,
        FigureId::Fig10 => delay_curves(ctx, &mut data)?,
        FigureId::FigB1 => director_fields(ctx, Family::TypeI, &mut data, run)?,
        FigureId::FigB2 => director_fields(ctx, Family::TypeII, &mut data, run)?,
    }
    run.table("data.csv", &data.0)?;
    println!("{}: {} rows", a.id.label(), data.0.rows.len());
    Ok(())
}

fn verdict(ctx: &Context, p: &GridProfile, b: f64, g: f64) -> String {
    linearized_spectrum(&ctx.coeffs, p, b, g, 1)
        .map(|r| r.verdict.label().to_string())
        .unwrap_or_else(|_| "undetermined".into())
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// Finite-`𝒢` continuation in `𝓑` used by the ω–𝓑 figures.
const LANDSCAPE_G: f64 = 5.0;

/// `ω` against `𝓑` at zero gradient with stability, fold markers, and the
/// finite-`𝒢` branches stored in the database.
fn omega_landscape(ctx: &Context, a: &FigureArgs, family: Family, data: &mut Data) -> Result<()> {
    let (bs, folds, seeds) = match family {
        Family::TypeI => (
            grid(0.005, 1.0, 200),
            vec![2, 4],
            (-4..=4).collect::<Vec<i32>>(),
        ),
        _ => (grid(0.01, 2.2, 220), vec![1, 3], (-3..=3).collect()),
    };
    let rows: Vec<Vec<(f64, f64, String, String)>> = bs
        .par_iter()
        .map(|&b| {
            let eqs = enumerate_equilibria(b, DEFAULT_A_MAX, &[family])?;
            Ok(eqs
                .iter()
                .map(|e| {
                    (
                        b,
                        e.omega(),
                        format!("G=0 {family}:{}", e.index),
                        verdict(ctx, &e.profile(ctx.nodes), b, 0.0),
                    )
                })
                .collect())
        })
        .collect::<nematic_core::Result<_>>()?;
    for (x, y, s, f) in rows.into_iter().flatten() {
        data.push(x, Some(y), s, f);
    }
    for i in folds {
        let b_star = critical_inverse_anchoring(family, i)?;
        let omega = equilibrium(family, i, b_star * (1.0 - 1e-9))
            .map(|e| e.omega())
            .unwrap_or(0.0);
        for sign in [1.0, -1.0] {
            data.push(b_star, Some(sign * omega), format!("fold B*{i}"), "fold");
        }
    }
    let db_path = ctx.db_path(a.branch_db.as_ref());
    let has_family = |db: &BranchDatabase| {
        db.index
            .branches
            .iter()
            .any(|b| b.family == family && b.parameter == "B")
    };
    if !BranchDatabase::exists(&db_path) || !has_family(&BranchDatabase::open(&db_path)?) {
        build_landscape_db(ctx, family, &seeds, db_path.clone())?;
    }
    let db = BranchDatabase::open(&db_path)?;
    for b in db
        .index
        .branches
        .iter()
        .filter(|b| b.family == family && b.parameter == "B")
    {
        for p in &b.points {
            let flag = p
                .verdict
                .map(|v| v.label().to_string())
                .unwrap_or_else(|| "unknown".into());
            data.push(p.b, Some(p.omega), format!("G={} {}", p.g, b.key), flag);
        }
    }
    Ok(())
}

fn build_landscape_db(ctx: &Context, family: Family, seeds: &[i32], db: PathBuf) -> Result<()> {
    let targets = match family {
        Family::TypeI => grid(0.02, 1.0, 50),
        _ => grid(0.02, 2.0, 100),
    };
    let cont = Command::Continue(ContinueArgs {
        param: ParamName::B,
        targets,
        seed: seeds.iter().map(|i| format!("{family}:{i}")).collect(),
        b: None,
        g: LANDSCAPE_G,
        branch_db: Some(db.clone()),
        max_step: None,
    });
    execute_upstream(ctx, &cont)?;
    let stab = Command::Stability(StabilityArgs {
        branch_db: db,
        point: None,
        k: 1,
    });
    execute_upstream(ctx, &stab)?;
    Ok(())
}

/// Full solutions and `θ*ₐ + 𝒢θ⁽¹⁾` at `𝓑 = 1/3`.
fn small_g(ctx: &Context, family: Family, index: i32, data: &mut Data) -> Result<()> {
    let b = 1.0 / 3.0;
    let gs = [1.0, 3.0, 5.0, 7.0];
    let eq = equilibrium(family, index, b)?;
    let branch = continue_seed_in_g(
        &ctx.coeffs,
        &eq,
        b,
        &gs,
        ctx.nodes,
        &ContinuationOptions::default(),
    )
    .map_err(|f| f.error)?;
    let corr = small_g_correction(&ctx.coeffs, &eq, b, ctx.nodes)?;
    for g in gs {
        let full = &branch
            .at(g)
            .ok_or_else(|| Error::Undefined(format!("missing G = {g}")))?
            .profile;
        let asym = corr.composite(g);
        let err = format!("sup_error={:.6e}", full.sup_distance(&asym));
        data.profile(full, &format!("full G={g}"), "");
        data.profile(&asym, &format!("asymptotic G={g}"), &err);
    }
    Ok(())
}

/// Full solutions and layer composites at large `𝒢`, `𝓑 = 1/3`.
fn large_g(ctx: &Context, data: &mut Data) -> Result<()> {
    let b = 1.0 / 3.0;
    let n = 4001;
    let gs = [100.0, 500.0, 1000.0];
    let opts = ContinuationOptions {
        max_step: 50.0,
        ..Default::default()
    };
    for (family, index) in [(Family::TypeI, 0), (Family::TypeII, 1)] {
        let eq = equilibrium(family, index, b)?;
        let branch = continue_seed_in_g(&ctx.coeffs, &eq, b, &gs, n, &opts).map_err(|f| f.error)?;
        for g in gs {
            let full = &branch
                .at(g)
                .ok_or_else(|| Error::Undefined(format!("missing G = {g}")))?
                .profile;
            let (ls, rs) = extract_outer_states(&ctx.coeffs, full)?;
            let comp =
                composite_large_g(&ctx.coeffs, ls, rs, g, b, DEFAULT_LAYER_NODES)?.profile(n);
            let err = format!("sup_error={:.6e}", full.sup_distance(&comp));
            data.profile(full, &format!("{family}:{index} full G={g}"), "");
            data.profile(&comp, &format!("{family}:{index} composite G={g}"), &err);
        }
    }
    Ok(())
}

/// `(a, b)` of every zero-gradient equilibrium at three anchoring strengths.
fn slope_intercept_landscape(ctx: &Context, data: &mut Data) -> Result<()> {
    for b in [0.001, 0.5, 1.0] {
        let eqs = enumerate_equilibria(b, DEFAULT_A_MAX, &Family::ALL)?;
        let flags: Vec<String> = eqs
            .par_iter()
            .map(|e| verdict(ctx, &e.profile(ctx.nodes), b, 0.0))
            .collect();
        for (e, f) in eqs.iter().zip(flags) {
            data.push(e.slope, Some(e.intercept), format!("B={b} {}", e.family), f);
        }
    }
    Ok(())
}

/// `𝓑*ᵢ,𝒢` for `i = ±2, ±3, ±4` on `𝒢 ∈ [0, 20]`.
fn fold_curves(ctx: &Context, data: &mut Data) -> Result<()> {
    let gs = grid(0.0, 20.0, 9);
    for i in [-4, -3, -2, 2, 3, 4] {
        let c = fold_curve(
            &ctx.coeffs,
            i,
            &gs,
            0.05,
            2.5,
            ctx.nodes,
            &FoldOptions::default(),
        )?;
        for s in &c.samples {
            data.push(
                s.g,
                s.b_star,
                format!("B*{i}"),
                if s.b_star.is_some() { "fold" } else { "none" },
            );
        }
    }
    Ok(())
}

/// Final states of `Θ = Cz` at `(𝒢, 𝓑) = (2, 0.1)` and the bisected `C*`.
fn staircase(ctx: &Context) -> Result<(Vec<RunOutcome>, Option<CriticalSearch>, Catalog)> {
    let (g, b) = (2.0, 0.1);
    let cfg = TimeStepperConfig::default();
    let cat = catalog(ctx, g, b, -8..=8, cfg.nodes()?);
    let cs = grid(-3.5 * PI, 3.5 * PI, 41);
    let out = sweep_initial_slope(&ctx.coeffs, g, b, &cs, &cat, &cfg)?;
    let a0 = BranchId::new(Family::TypeI, 0);
    let search = match sweep_bracket(&out, a0) {
        Some(br) => Some(find_critical_c(
            &ctx.coeffs,
            g,
            b,
            br,
            a0,
            &cat,
            &cfg,
            1e-3,
        )?),
        None => None,
    };
    Ok((out, search, cat))
}

fn winding_staircase(ctx: &Context, data: &mut Data) -> Result<()> {
    let (out, search, _) = staircase(ctx)?;
    for o in &out {
        let flag = o
            .matched
            .map(|m| m.to_string())
            .unwrap_or_else(|| "none".into());
        data.push(o.parameter, Some(o.omega), "final omega", flag);
    }
    if let Some(s) = search {
        let f = |m: Option<BranchId>| m.map(|m| m.to_string()).unwrap_or_default();
        data.push(
            s.critical,
            None,
            "C*",
            format!("{}|{}", f(s.below), f(s.above)),
        );
    }
    Ok(())
}

/// The equilibria on either side of `C*` and the critical line `C*z`.
fn critical_profiles(ctx: &Context, data: &mut Data) -> Result<()> {
    let (_, search, cat) = staircase(ctx)?;
    for i in [-2, 0, 2] {
        let id = BranchId::new(Family::TypeI, i);
        if let Some(p) = cat.get(id) {
            data.profile(p, &id.to_string(), "equilibrium");
        }
    }
    let s = search.ok_or_else(|| Error::Undefined("sweep does not bracket C*".into()))?;
    let n = cat
        .entries
        .first()
        .map(|e| e.1.n_points())
        .unwrap_or(ctx.nodes);
    data.profile(
        &GridProfile::from_fn(n, |z| s.critical * z),
        "C* z",
        "initial",
    );
    Ok(())
}

/// `t₁*(C)` for `𝓑 ∈ {0.5, 0.8, 1}` with `Ḡ = 40`, `t₂ = 0`, `δ = κ = 5`.
fn delay_curves(ctx: &Context, data: &mut Data) -> Result<()> {
    let cfg = TimeStepperConfig::default();
    let a0 = BranchId::new(Family::TypeI, 0);
    let cs = grid(-4.0, -2.0, 9);
    for b in [0.5, 0.8, 1.0] {
        let exp = DelayExperiment {
            g_bar: 40.0,
            delta: 5.0,
            kappa: 5.0,
            t2: 0.0,
            b,
        };
        let cat = catalog(ctx, exp.g_bar, b, -4..=0, cfg.nodes()?);
        let series = format!("B={b}");
        for (c, r) in cs
            .iter()
            .zip(delay_search(ctx, &exp, &cs, 10.0, a0, &cat, &cfg, 1e-3)?)
        {
            match r {
                CriticalDelay::Found(s) => data.push(*c, Some(s.critical), &series, "found"),
                CriticalDelay::AtOnset => data.push(*c, Some(exp.t2), &series, "at-onset"),
                CriticalDelay::Undefined { .. } => data.push(*c, None, &series, "undefined"),
            }
        }
        let onset =
            find_critical_c_at_onset(&ctx.coeffs, &exp, (-4.0, -1.5), a0, &cat, &cfg, 1e-4)?;
        data.push(onset.critical, Some(exp.t2), format!("C* B={b}"), "onset");
    }
    Ok(())
}

/// Strong-anchoring profiles and director components, `|n| ≤ 3`.
fn director_fields(ctx: &Context, family: Family, data: &mut Data, run: &mut Run) -> Result<()> {
    let b = 0.001;
    let mut dirs = Table::new(&["series", "z", "n_x", "n_y", "n_z"]);
    for i in -3..=3 {
        let eq = equilibrium(family, i, b)?;
        let p = eq.profile(ctx.nodes);
        let series = format!("{family}:{i}");
        data.profile(&p, &series, &verdict(ctx, &p, b, 0.0));
        for z in grid(-1.0, 1.0, 21) {
            let n = director(eq.theta(z));
            dirs.push(vec![
                series.clone(),
                num(z),
                num(n[0]),
                num(n[1]),
                num(n[2]),
            ]);
        }
    }
    run.table("director.csv", &dirs)?;
    Ok(())
}
