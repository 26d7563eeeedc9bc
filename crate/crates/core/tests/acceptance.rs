//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the run; any other FAIL, or a PASS of a known failure, does.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nematic_core::analytic::{
    critical_inverse_anchoring, enumerate_equilibria, equilibrium, solve_type1_slopes,
    solve_type2_slopes, solve_type34_intercepts, Family, DEFAULT_A_MAX,
};
use nematic_core::asymptotics::{
    center_width, composite_large_g, extract_outer_states, large_g, layer_width, small_g_correction,
};
use nematic_core::dynamics::{
    build_catalog, evolve, find_critical_c, find_critical_c_at_onset, find_critical_t1,
    make_initial, run_linear, sweep_initial_slope, BranchId, Catalog, CriticalDelay,
    DelayExperiment, InitialKind, Schedule, TimeStepperConfig,
};
use nematic_core::stability::{
    channel_theta0_eigenvalues, classify_parity, linearized_spectrum, theta0_eigenvalues, Verdict,
};
use nematic_core::statics::{
    continue_seed_in_g, detect_fold, fold_curve, fold_pair_at, solve_equilibrium, static_residual,
    ContinuationOptions, FoldOptions,
};
use nematic_core::{GridProfile, LeslieCoefficients};

const C: LeslieCoefficients = LeslieCoefficients::FIVE_CB;

/// Criteria that fail at the stated tolerance; see the README.
const KNOWN_FAILURES: &[u32] = &[5];

struct Verdicts {
    checks: Vec<(String, bool)>,
}

impl Verdicts {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn failed_labels(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

type Criterion = fn(&mut Verdicts) -> Result<(), String>;

fn fmt_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn c1_zero_gradient_folds(v: &mut Verdicts) -> Result<(), String> {
    let b1 = critical_inverse_anchoring(Family::TypeII, 1).map_err(fmt_err)?;
    let b2 = critical_inverse_anchoring(Family::TypeI, 2).map_err(fmt_err)?;
    let b3 = critical_inverse_anchoring(Family::TypeII, 3).map_err(fmt_err)?;
    let b4 = critical_inverse_anchoring(Family::TypeI, 4).map_err(fmt_err)?;
    println!("    analytic B*1..4 = {b1}, {b2:.6}, {b3:.6}, {b4:.6}");
    v.check("B*1 = 2", b1 == 2.0);
    v.check("B*2 in (0.3, 0.6)", b2 > 0.3 && b2 < 0.6);
    v.check("B*4 in (0.1, 0.3)", b4 > 0.1 && b4 < 0.3);
    v.check("B*3 < 0.7", b3 < 0.7);
    for (index, exact, b_start) in [
        (1, b1, 1.5),
        (2, b2, 0.2),
        (3, b3, 0.1),
        (4, b4, 0.1),
        (-2, b2, 0.2),
    ] {
        let pairs = fold_pair_at(
            &C,
            index,
            b_start,
            &[0.0],
            161,
            &ContinuationOptions::default(),
        )
        .map_err(fmt_err)?;
        let (s, p) = &pairs[0];
        let f = detect_fold(&C, s, p, 3.0, &FoldOptions::default()).map_err(fmt_err)?;
        println!(
            "    fold {index}: numeric {:.6} analytic {exact:.6}",
            f.b_star
        );
        v.check(
            format!("fold {index} within 1e-3"),
            (f.b_star - exact).abs() < 1e-3,
        );
    }
    Ok(())
}

fn c2_type34_threshold(v: &mut Verdicts) -> Result<(), String> {
    let t = 4.0 / PI;
    // the |slope| = π/4 members: Type III n = 0 and Type IV n = −1
    for (family, n) in [(Family::TypeIII, 0), (Family::TypeIV, -1)] {
        let below = solve_type34_intercepts(t - 1e-3, n, family).map_err(fmt_err)?;
        let above = solve_type34_intercepts(t + 1e-3, n, family).map_err(fmt_err)?;
        println!(
            "    {family} n={n}: {} intercepts below, {} above",
            below.len(),
            above.len()
        );
        v.check(format!("{family}:{n} exists below 4/pi"), !below.is_empty());
        v.check(format!("{family}:{n} absent above 4/pi"), above.is_empty());
    }
    let iv0 = 4.0 / (3.0 * PI);
    println!("    info: Type IV n=0 has slope 3pi/4, threshold 4/(3pi) = {iv0:.6}");
    Ok(())
}

fn c3_stability_parity(v: &mut Verdicts) -> Result<(), String> {
    let b = 0.001;
    let n = 161;
    let mut count = 0;
    for family in [Family::TypeI, Family::TypeII] {
        for index in -4..=4 {
            let eq = equilibrium(family, index, b).map_err(fmt_err)?;
            let rep = linearized_spectrum(&C, &eq.profile(n), b, 0.0, 1).map_err(fmt_err)?;
            let expected = classify_parity(family, index);
            count += 1;
            if rep.verdict != expected {
                println!(
                    "    {family}:{index} lambda0 = {:.4e}, expected {expected}",
                    rep.leading_eigenvalue
                );
            }
            v.check(format!("{family}:{index} parity"), rep.verdict == expected);
        }
    }
    println!("    {count} Type I/II branches checked at B = {b}");
    for (b, family, n_label) in [
        (0.5, Family::TypeIII, 0),
        (1.0, Family::TypeIV, -1),
        (0.3, Family::TypeIV, 0),
    ] {
        let eqs = enumerate_equilibria(b, DEFAULT_A_MAX, &[family]).map_err(fmt_err)?;
        let members: Vec<_> = eqs.iter().filter(|e| e.index == n_label).collect();
        v.check(
            format!("{family}:{n_label} exists at B = {b}"),
            !members.is_empty(),
        );
        for eq in members {
            let rep = linearized_spectrum(&C, &eq.profile(n), b, 0.0, 1).map_err(fmt_err)?;
            println!(
                "    {family}:{n_label} b = {:.4} at B = {b}: lambda0 = {:.4}",
                eq.intercept, rep.leading_eigenvalue
            );
            v.check(
                format!("{family}:{n_label} unstable at B = {b}"),
                rep.verdict == Verdict::Unstable,
            );
        }
    }
    Ok(())
}

fn c4_theta0_spectrum(v: &mut Verdicts) -> Result<(), String> {
    let b = 0.5;
    let exact = channel_theta0_eigenvalues(&C, b, 3).spectrum_prefix;
    let eq = GridProfile::constant(801, 0.0);
    let num = linearized_spectrum(&C, &eq, b, 0.0, 3)
        .map_err(fmt_err)?
        .spectrum_prefix;
    for (k, (a, e)) in num.iter().zip(&exact).enumerate() {
        let rel = (a - e).abs() / e.abs();
        println!("    lambda{k}: discrete {a:.8} closed form {e:.8} rel {rel:.2e}");
        v.check(format!("lambda{k} rel < 1e-4"), rel < 1e-4);
    }
    let unmapped = theta0_eigenvalues(&C, b, 3);
    println!("    info: relation at B without the channel mapping {unmapped:.4?}");
    Ok(())
}

fn small_g_errors(family: Family, index: i32, gs: &[f64]) -> Result<Vec<f64>, String> {
    let b = 1.0 / 3.0;
    let n = 801;
    let base = equilibrium(family, index, b).map_err(fmt_err)?;
    let corr = small_g_correction(&C, &base, b, n).map_err(fmt_err)?;
    let opts = ContinuationOptions {
        max_step: 0.25,
        ..Default::default()
    };
    let branch = continue_seed_in_g(&C, &base, b, gs, n, &opts).map_err(fmt_err)?;
    gs.iter()
        .map(|&g| {
            let full = branch.at(g).ok_or_else(|| format!("missing G = {g}"))?;
            Ok(full.profile.sup_distance(&corr.composite(g)))
        })
        .collect()
}

fn c5_small_g(v: &mut Verdicts) -> Result<(), String> {
    let gs = [0.05, 0.1, 0.2];
    let e = small_g_errors(Family::TypeII, 1, &gs)?;
    let ratio = e[2] / e[1];
    println!(
        "    a~1 errors {:.3e} {:.3e} {:.3e}, ratio(0.2/0.1) = {ratio:.3}",
        e[0], e[1], e[2]
    );
    v.check("a~1 ratio in [3.2, 4.8]", (3.2..=4.8).contains(&ratio));
    let e0 = small_g_errors(Family::TypeI, 0, &gs)?;
    println!(
        "    info: a0 ratio(0.2/0.1) = {:.3} (odd correction, third-order remainder)",
        e0[2] / e0[1]
    );
    let big: Vec<f64> = (1..=7).map(|g| g as f64).collect();
    let e7 = small_g_errors(Family::TypeII, 1, &big)?;
    let worst = e7.iter().cloned().fold(0.0, f64::max);
    println!(
        "    a~1 error up to G = 7: {}",
        e7.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    v.check("a~1 within 0.05 rad up to G = 7", worst < 0.05);
    let e7a0 = small_g_errors(Family::TypeI, 0, &big)?;
    println!(
        "    info: a0 error up to G = 7: max {:.4}",
        e7a0.iter().cloned().fold(0.0, f64::max)
    );
    Ok(())
}

fn c6_large_g(v: &mut Verdicts) -> Result<(), String> {
    let b = 1.0 / 3.0;
    let gs = [100.0, 500.0, 1000.0];
    let n = 4001;
    let opts = ContinuationOptions {
        max_step: 50.0,
        ..Default::default()
    };
    for (family, index) in [(Family::TypeI, 0), (Family::TypeII, 1)] {
        let seed = equilibrium(family, index, b).map_err(fmt_err)?;
        let branch = continue_seed_in_g(&C, &seed, b, &gs, n, &opts).map_err(fmt_err)?;
        let profiles: Vec<&GridProfile> = gs
            .iter()
            .map(|&g| {
                branch
                    .at(g)
                    .map(|p| &p.profile)
                    .ok_or_else(|| format!("missing G = {g}"))
            })
            .collect::<Result<_, _>>()?;
        let label = format!("{family}:{index}");
        let widths: Vec<f64> = profiles
            .iter()
            .map(|p| layer_width(&C, p, 0.5).map(|w| 0.5 * (w.0 + w.1)))
            .collect::<Result<_, _>>()
            .map_err(fmt_err)?;
        let s = loglog_slope(&gs, &widths);
        println!("    {label} wall width (half decay) {widths:.4?} slope {s:.4}");
        v.check(
            format!("{label} wall slope -0.5 +- 0.05"),
            (s + 0.5).abs() <= 0.05,
        );
        let strict: Vec<String> = profiles
            .iter()
            .map(|p| match layer_width(&C, p, 0.01) {
                Ok(w) => format!("{:.4e}", 0.5 * (w.0 + w.1)),
                Err(_) => "undefined".into(),
            })
            .collect();
        println!(
            "    info: {label} wall width at 1% decay {}",
            strict.join(" ")
        );
        let centers: Vec<Option<f64>> = profiles
            .iter()
            .map(|p| center_width(&C, p, 0.1).ok())
            .collect();
        if centers.iter().all(Option::is_some) {
            let c: Vec<f64> = centers.iter().map(|x| x.unwrap()).collect();
            let s = loglog_slope(&gs, &c);
            println!("    {label} center width {c:.4?} slope {s:.4}");
            v.check(
                format!("{label} center slope -0.33 +- 0.05"),
                (s + 0.33).abs() <= 0.05,
            );
        }
        let errors: Vec<f64> = gs
            .iter()
            .zip(&profiles)
            .map(|(&g, p)| {
                let (ls, rs) = extract_outer_states(&C, p)?;
                let comp = composite_large_g(&C, ls, rs, g, b, large_g::DEFAULT_LAYER_NODES)?;
                Ok(p.sup_distance(&comp.profile(n)))
            })
            .collect::<nematic_core::Result<_>>()
            .map_err(fmt_err)?;
        println!("    {label} composite error {errors:.4?}");
        v.check(
            format!("{label} composite error decreasing"),
            errors[0] > errors[1] && errors[1] > errors[2],
        );
    }
    Ok(())
}

fn c7_fold_trends(v: &mut Verdicts) -> Result<(), String> {
    let curve = fold_curve(
        &C,
        -2,
        &[0.0, 5.0, 10.0, 20.0],
        0.05,
        2.5,
        161,
        &FoldOptions::default(),
    )
    .map_err(fmt_err)?;
    let b: Vec<Option<f64>> = curve.samples.iter().map(|s| s.b_star).collect();
    println!("    B*-2 at G = 0, 5, 10, 20: {b:?}");
    match (b[0], b[1], b[2]) {
        (Some(x), Some(y), Some(z)) => v.check("B*-2 increasing on G = 0, 5, 10", x < y && y < z),
        _ => v.check("B*-2 defined on G = 0, 5, 10", false),
    }
    v.check("no (a-2, a-1) fold at G = 20 up to B = 2.5", b[3].is_none());
    Ok(())
}

fn type1_catalog(
    g: f64,
    b: f64,
    indices: std::ops::RangeInclusive<i32>,
    cfg: &TimeStepperConfig,
) -> Catalog {
    let seeds: Vec<BranchId> = indices.map(|i| BranchId::new(Family::TypeI, i)).collect();
    build_catalog(
        &C,
        g,
        b,
        &seeds,
        0.1,
        cfg.nodes().unwrap(),
        &ContinuationOptions::default(),
    )
}

fn c8_steady_selection(v: &mut Verdicts) -> Result<(), String> {
    let (g, b) = (2.0, 0.1);
    let cfg = TimeStepperConfig::default();
    let cat = type1_catalog(g, b, -8..=8, &cfg);
    let cs: Vec<f64> = (0..41)
        .map(|k| -3.5 * PI + 7.0 * PI * k as f64 / 40.0)
        .collect();
    let out = sweep_initial_slope(&C, g, b, &cs, &cat, &cfg).map_err(fmt_err)?;
    let omegas: Vec<i64> = out.iter().map(|o| o.omega.round() as i64).collect();
    println!("    rounded final omega: {omegas:?}");
    v.check(
        "all runs converged and matched",
        out.iter().all(|o| o.converged && o.matched.is_some()),
    );
    v.check(
        "staircase nondecreasing",
        omegas.windows(2).all(|w| w[0] <= w[1]),
    );
    v.check(
        "staircase covers -3..3",
        (-3..=3).all(|k| omegas.contains(&k)),
    );
    let a0 = BranchId::new(Family::TypeI, 0);
    let am2 = BranchId::new(Family::TypeI, -2);
    let last_below = out
        .iter()
        .rev()
        .find(|o| o.matched == Some(am2))
        .map(|o| o.parameter);
    let first_above = out
        .iter()
        .find(|o| o.matched == Some(a0))
        .map(|o| o.parameter);
    let (Some(lo), Some(hi)) = (last_below, first_above) else {
        v.check("sweep brackets C*", false);
        return Ok(());
    };
    let s = find_critical_c(&C, g, b, (lo, hi), a0, &cat, &cfg, 1e-3).map_err(fmt_err)?;
    println!(
        "    C* = {:.5} in ({:.5}, {:.5}), below {:?}, above {:?}",
        s.critical,
        s.bracket.0,
        s.bracket.1,
        s.below.map(|m| m.to_string()),
        s.above.map(|m| m.to_string())
    );
    v.check("C* in (-pi, 0)", s.critical > -PI && s.critical < 0.0);
    v.check("C* bracket < 1e-3", s.bracket.1 - s.bracket.0 < 1e-3);
    v.check(
        "a-2 below C*, a0 above",
        s.below == Some(am2) && s.above == Some(a0),
    );
    Ok(())
}

fn c9_delay_criticality(v: &mut Verdicts) -> Result<(), String> {
    let cfg = TimeStepperConfig::default();
    let a0 = BranchId::new(Family::TypeI, 0);
    let am2 = BranchId::new(Family::TypeI, -2);
    let bs = [0.5, 0.8, 1.0];
    let cs = [-4.0, -3.5, -3.0, -2.5];
    let mut curves = Vec::new();
    for &b in &bs {
        let cat = type1_catalog(40.0, b, -4..=0, &cfg);
        let exp = DelayExperiment {
            g_bar: 40.0,
            delta: 5.0,
            kappa: 5.0,
            t2: 0.0,
            b,
        };
        // C* of the ramped experiment at zero delay
        let onset = find_critical_c_at_onset(&C, &exp, (-4.0, -1.5), a0, &cat, &cfg, 1e-4)
            .map_err(fmt_err)?
            .critical;
        let mut curve = Vec::new();
        for &c in &cs {
            let r = find_critical_t1(&C, c, &exp, 10.0, a0, &cat, &cfg, 1e-3).map_err(fmt_err)?;
            curve.push(match r {
                CriticalDelay::Found(s) => Some(s.critical),
                _ => None,
            });
        }
        let near: Vec<f64> = [0.2, 0.05, 0.01]
            .iter()
            .map(
                |d| match find_critical_t1(&C, onset - d, &exp, 10.0, a0, &cat, &cfg, 1e-4) {
                    Ok(CriticalDelay::Found(s)) => s.critical,
                    _ => f64::NAN,
                },
            )
            .collect();
        println!(
            "    B = {b}: C* = {onset:.4}, t1*(C) at {cs:?} = {curve:.4?}, near C* {near:.4?}"
        );
        v.check(
            format!("t1* -> 0 as C -> C* at B = {b}"),
            near[0] > near[1] && near[1] > near[2] && near[2] < 0.02,
        );
        // ordering: t1 ≤ t2 reproduces constant-parameter outcomes
        for (c, t1) in [(-3.0, 0.0), (-3.5, -0.5), (-2.5, -1.0)] {
            let ramped = run_linear(&C, c, &exp.schedule(c, t1), &cat, &cfg).map_err(fmt_err)?;
            let constant =
                run_linear(&C, c, &Schedule::constant(40.0, b), &cat, &cfg).map_err(fmt_err)?;
            v.check(
                format!("ordering at B = {b}, C = {c}, t1 = {t1}"),
                ramped.matched.is_some()
                    && ramped.matched == constant.matched
                    && ramped.matched == Some(am2),
            );
        }
        curves.push(curve);
    }
    v.check(
        "t1* defined on the sampled C in [-4, -2]",
        curves.iter().all(|c| c.iter().all(Option::is_some)),
    );
    for j in 0..cs.len() {
        let vals: Vec<f64> = curves.iter().map(|c| c[j].unwrap_or(f64::NAN)).collect();
        v.check(
            format!("t1* decreasing in B at C = {}", cs[j]),
            vals[0] > vals[1] && vals[1] > vals[2],
        );
    }
    Ok(())
}

fn c10_properties(v: &mut Verdicts) -> Result<(), String> {
    // π-shift equivariance of trajectories
    let cfg = TimeStepperConfig {
        t_max: 20.0,
        snapshot_every: 100,
        ..Default::default()
    };
    let n = cfg.nodes().map_err(fmt_err)?;
    let init = make_initial(InitialKind::Linear, -2.3, n);
    let sched = Schedule::constant(2.0, 0.1);
    let a = evolve(&C, &init, &sched, &cfg).map_err(fmt_err)?;
    let b = evolve(&C, &init.shifted(1), &sched, &cfg).map_err(fmt_err)?;
    let shift_err = a
        .snapshots
        .iter()
        .zip(&b.snapshots)
        .flat_map(|(x, y)| {
            x.theta
                .iter()
                .zip(&y.theta)
                .map(|(p, q)| (q - p - PI).abs())
        })
        .fold(0.0, f64::max);
    println!(
        "    pi-shift deviation {shift_err:.2e} over {} snapshots",
        a.snapshots.len()
    );
    v.check(
        "pi-shift equivariance 1e-10",
        shift_err < 1e-10 && a.snapshots.len() == b.snapshots.len(),
    );

    // root-set symmetry and defining-equation residuals
    let mut worst = 0.0f64;
    for bb in [0.05, 0.3, 1.0, 1.9] {
        let eqs = enumerate_equilibria(bb, DEFAULT_A_MAX, &[Family::TypeI, Family::TypeII])
            .map_err(fmt_err)?;
        let symmetric = eqs.iter().all(|e| {
            eqs.iter()
                .any(|f| f.family == e.family && (f.slope + e.slope).abs() < 1e-14)
        });
        v.check(format!("root symmetry at B = {bb}"), symmetric);
        for r in solve_type1_slopes(bb, DEFAULT_A_MAX).map_err(fmt_err)? {
            worst = worst.max((bb * r.a + (2.0 * r.a).sin()).abs());
        }
        for r in solve_type2_slopes(bb, DEFAULT_A_MAX).map_err(fmt_err)? {
            worst = worst.max((bb * r.a - (2.0 * r.a).sin()).abs());
        }
    }
    println!("    max slope residual {worst:.2e}");
    v.check("slope residuals < 1e-12", worst < 1e-12);

    // residual bound on stored branch points
    let seed = equilibrium(Family::TypeI, 2, 0.2).map_err(fmt_err)?;
    let targets: Vec<f64> = (1..=10).map(|k| k as f64).collect();
    let branch = continue_seed_in_g(
        &C,
        &seed,
        0.2,
        &targets,
        161,
        &ContinuationOptions::default(),
    )
    .map_err(fmt_err)?;
    let max_res = branch
        .points
        .iter()
        .map(|p| static_residual(&C, p.g, p.b, &p.profile))
        .fold(0.0, f64::max);
    println!(
        "    {} branch points, max residual {max_res:.2e}",
        branch.points.len()
    );
    v.check("branch residuals < 1e-10", max_res < 1e-10);

    // statics grid convergence at G = 2
    let fine = |nn: usize| -> Result<GridProfile, String> {
        let s = equilibrium(Family::TypeI, 2, 0.2).map_err(fmt_err)?;
        let br = continue_seed_in_g(&C, &s, 0.2, &[2.0], nn, &ContinuationOptions::default())
            .map_err(fmt_err)?;
        Ok(br.last().profile.clone())
    };
    let reference = fine(3201)?;
    let d: Vec<f64> = [201, 401, 801]
        .iter()
        .map(|&nn| fine(nn).map(|p| p.sup_distance(&reference.resample(nn))))
        .collect::<Result<_, _>>()?;
    let r1 = d[0] / d[1];
    let r2 = d[1] / d[2];
    println!(
        "    statics errors {:.3e} {:.3e} {:.3e}, ratios {r1:.3} {r2:.3}",
        d[0], d[1], d[2]
    );
    v.check(
        "statics ratio in [3, 5]",
        (3.0..=5.0).contains(&r1) && (3.0..=5.0).contains(&r2),
    );

    // stability grid convergence for θ* ≡ 0
    let exact = channel_theta0_eigenvalues(&C, 0.5, 1).leading_eigenvalue;
    let lam = |nn: usize| {
        linearized_spectrum(&C, &GridProfile::constant(nn, 0.0), 0.5, 0.0, 1)
            .map(|r| r.leading_eigenvalue)
    };
    let e1 = (lam(101).map_err(fmt_err)? - exact).abs();
    let e2 = (lam(201).map_err(fmt_err)? - exact).abs();
    let ratio = e1 / e2;
    println!("    stability lambda0 error ratio {ratio:.3}");
    v.check("stability ratio 4 +- 20%", (3.2..=4.8).contains(&ratio));

    // time-step halving for the staircase base case
    let base = make_initial(InitialKind::Linear, -2.3, n);
    let coarse = evolve(&C, &base, &sched, &TimeStepperConfig::default()).map_err(fmt_err)?;
    let half = evolve(
        &C,
        &base,
        &sched,
        &TimeStepperConfig {
            dt: 0.005,
            ..Default::default()
        },
    )
    .map_err(fmt_err)?;
    let dt_diff = coarse.final_profile.sup_distance(&half.final_profile);
    println!("    dt halving final-profile change {dt_diff:.2e}");
    v.check(
        "dt halving < 1e-6",
        coarse.converged && half.converged && dt_diff < 1e-6,
    );

    // converged states satisfy the static residual bound and are stable
    let res_ok = coarse.final_profile.residual_norm < 10.0 * 1e-8;
    let solved = solve_equilibrium(&C, 2.0, 0.1, &coarse.final_profile).map_err(fmt_err)?;
    let stab = linearized_spectrum(&C, &solved, 0.1, 2.0, 1).map_err(fmt_err)?;
    v.check(
        "final state residual and stability",
        res_ok && stab.verdict == Verdict::Stable,
    );
    Ok(())
}

fn main() {
    let criteria: [(u32, &str, Criterion, Duration); 10] = [
        (
            1,
            "zero-gradient fold values",
            c1_zero_gradient_folds,
            Duration::from_secs(1),
        ),
        (
            2,
            "Type III/IV existence threshold",
            c2_type34_threshold,
            Duration::from_secs(1),
        ),
        (
            3,
            "stability parity",
            c3_stability_parity,
            Duration::from_secs(30),
        ),
        (
            4,
            "uniform-state spectrum",
            c4_theta0_spectrum,
            Duration::from_secs(10),
        ),
        (
            5,
            "small-G asymptotics",
            c5_small_g,
            Duration::from_secs(30),
        ),
        (
            6,
            "large-G boundary layers",
            c6_large_g,
            Duration::from_secs(120),
        ),
        (
            7,
            "fold-curve trends",
            c7_fold_trends,
            Duration::from_secs(300),
        ),
        (
            8,
            "steady-state selection",
            c8_steady_selection,
            Duration::from_secs(600),
        ),
        (
            9,
            "delay criticality",
            c9_delay_criticality,
            Duration::from_secs(900),
        ),
        (
            10,
            "property suites",
            c10_properties,
            Duration::from_secs(300),
        ),
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut unexpected = Vec::new();
    for (id, name, run, budget) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let mut v = Verdicts::new();
        let start = Instant::now();
        let result = run(&mut v);
        let elapsed = start.elapsed();
        if let Err(e) = &result {
            println!("    error: {e}");
        }
        v.check(format!("runtime < {budget:?}"), elapsed < budget);
        let pass = result.is_ok() && v.passed();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = match (pass, known) {
            (false, true) => " [known failure]",
            (true, true) => " [known failure now passes]",
            _ => "",
        };
        println!(
            "criterion {id:>2} {tag} {name} ({:.2} s){note}",
            elapsed.as_secs_f64()
        );
        if !pass {
            println!("    failed checks: {}", v.failed_labels().join("; "));
        }
        if pass == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected acceptance outcomes: {unexpected:?}");
        std::process::exit(1);
    }
}
