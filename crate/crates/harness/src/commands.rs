//! One function per subcommand, plus the shared run wrapper.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};

use nematic_core::analytic::{
    enumerate_equilibria, equilibrium, AnalyticEquilibrium, Family, DEFAULT_A_MAX,
};
use nematic_core::asymptotics::{
    center_width, composite_large_g, extract_outer_states, large_g::DEFAULT_LAYER_NODES,
    layer_width, small_g_correction,
};
use nematic_core::dynamics::matching::DEFAULT_MATCH_THRESHOLD;
use nematic_core::dynamics::{
    evolve, find_critical_c, make_initial, match_steady_state, sweep_initial_slope, Anchoring,
    BranchId, InitialKind, Pressure, RunOutcome, Schedule, TimeStepperConfig,
};
use nematic_core::stability::linearized_spectrum;
use nematic_core::statics::{
    continue_in_b, continue_in_g, continue_seed_in_g, fold_curve, seed_point, solve_equilibrium,
    Branch, BranchPoint, ContinuationOptions, FoldOptions, Parameter,
};
use nematic_core::{Error, LeslieCoefficients};

use crate::cli::*;
use crate::database::BranchDatabase;
use crate::error::{usage, HarnessError, Result};
use crate::experiments::{self, catalog, parse_index_range};
use crate::figures;
use crate::output::{digest, num, opt_num, profile_table, read_profile, Run, RunManifest, Table};

/// Settings shared by every command of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Context {
    pub root: PathBuf,
    pub coeffs: LeslieCoefficients,
    pub nodes: usize,
}

impl Context {
    pub fn settings(&self) -> serde_json::Value {
        json!({
            "nodes": self.nodes,
            "continuation": format!("{:?}", ContinuationOptions::default()),
            "stepper_defaults": TimeStepperConfig::default(),
        })
    }

    pub fn default_db(&self) -> PathBuf {
        self.root.join("branches")
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.root.join(p)
        }
    }

    /// Database paths given on the command line are relative to the root.
    pub fn db_path(&self, p: Option<&PathBuf>) -> PathBuf {
        p.map(|p| self.resolve(p))
            .unwrap_or_else(|| self.default_db())
    }
}

/// Run-directory label: the figure id, or a parameter hash.
fn label(ctx: &Context, cmd: &Command) -> String {
    match cmd {
        Command::ReproduceFigure(f) => f.id.label(),
        _ => digest(&(cmd, &ctx.coeffs, ctx.nodes))[..16].to_string(),
    }
}

/// Run directory of `cmd`, relative to the output root.
pub fn run_dir(ctx: &Context, cmd: &Command) -> String {
    format!("{}/{}", cmd.name(), label(ctx, cmd))
}

/// Runs one (non-pipeline) command and writes its manifest.
pub fn execute(ctx: &Context, cmd: &Command) -> Result<RunManifest> {
    if matches!(cmd, Command::RunConfig(_)) {
        return usage("run-config cannot be nested");
    }
    if !matches!(cmd, Command::ValidateCoefficients) {
        let report = ctx.coeffs.validate();
        if !report.passed() {
            return usage(format!(
                "coefficients fail validation: {}",
                report.failures.join("; ")
            ));
        }
    }
    let parameters =
        serde_json::to_value(cmd).map_err(|e| HarnessError::format("parameters", e))?;
    let mut run = Run::start(
        &ctx.root,
        cmd.name(),
        &label(ctx, cmd),
        parameters,
        ctx.coeffs,
        ctx.settings(),
    )?;
    let mut deferred = None;
    match cmd {
        Command::ValidateCoefficients => deferred = validate_coefficients(ctx, &mut run)?,
        Command::StaticsAnalytic(a) => statics_analytic(ctx, a, &mut run)?,
        Command::StaticsSolve(a) => statics_solve(ctx, a, &mut run)?,
        Command::Continue(a) => continue_branches(ctx, a, &mut run)?,
        Command::Folds(a) => folds(ctx, a, &mut run)?,
        Command::Stability(a) => stability(ctx, a, &mut run)?,
        Command::AsymptoticsCompare(a) => asymptotics_compare(ctx, a, &mut run)?,
        Command::Evolve(a) => evolve_one(ctx, a, &mut run)?,
        Command::SweepCStar(a) => sweep_c_star(ctx, a, &mut run)?,
        Command::SweepT1Star(a) => sweep_t1_star(ctx, a, &mut run)?,
        Command::ReproduceFigure(a) => figures::reproduce(ctx, a, &mut run)?,
        Command::RunConfig(_) => unreachable!(),
    }
    let manifest = run.finish()?;
    match deferred {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}

/// Runs an upstream command, naming it in any failure.
pub fn execute_upstream(ctx: &Context, cmd: &Command) -> Result<RunManifest> {
    execute(ctx, cmd).map_err(|e| HarnessError::stage(format!("upstream {}", cmd.name()), e))
}

fn validate_coefficients(ctx: &Context, run: &mut Run) -> Result<Option<HarnessError>> {
    let report = ctx.coeffs.validate();
    run.json(
        "validation.json",
        &json!({ "coefficients": ctx.coeffs, "passed": report.passed(), "report": report }),
    )?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.passed() {
        println!("coefficients valid");
        Ok(None)
    } else {
        Ok(Some(HarnessError::Numeric(Error::InvalidCoefficients(
            report.failures.join("; "),
        ))))
    }
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse()
        .map_err(|e: Error| HarnessError::Usage(e.to_string()))
}

/// `family:index[:root]`; the root selects a Type III/IV intercept.
pub fn parse_seed(s: &str, b: f64) -> Result<AnalyticEquilibrium> {
    let parts: Vec<&str> = s.split(':').collect();
    let (family, index, root) = match parts.as_slice() {
        [f, i] => (parse_family(f)?, *i, "0"),
        [f, i, r] => (parse_family(f)?, *i, *r),
        _ => return usage(format!("seed {s:?} is not family:index")),
    };
    let index: i32 = index
        .parse()
        .map_err(|_| HarnessError::Usage(format!("bad index in seed {s:?}")))?;
    let root: usize = root
        .parse()
        .map_err(|_| HarnessError::Usage(format!("bad root in seed {s:?}")))?;
    match family {
        Family::TypeI | Family::TypeII => Ok(equilibrium(family, index, b)?),
        _ => enumerate_equilibria(
            b,
            DEFAULT_A_MAX.max((index.abs() as f64 + 1.0) * std::f64::consts::PI),
            &[family],
        )?
        .into_iter()
        .filter(|e| e.index == index)
        .nth(root)
        .ok_or_else(|| {
            HarnessError::Numeric(Error::Undefined(format!("{s} does not exist at B = {b}")))
        }),
    }
}

pub fn parse_branch_id(s: &str) -> Result<BranchId> {
    s.parse()
        .map_err(|e: Error| HarnessError::Usage(e.to_string()))
}

fn is_file_seed(s: &str) -> bool {
    s.ends_with(".csv") || Path::new(s).is_file()
}

/// Starting point at `(g, b)` with its branch label.
fn seed_start(ctx: &Context, seed: &str, g: f64, b: f64) -> Result<(Family, i32, BranchPoint)> {
    if is_file_seed(seed) {
        let guess = read_profile(&ctx.resolve(Path::new(seed)))?;
        let profile = solve_equilibrium(&ctx.coeffs, g, b, &guess)?;
        let p = BranchPoint::new(g, b, profile);
        // file seeds are labelled by their intercept and rounded 2ω
        let mid = p.profile.interpolate(0.0).rem_euclid(std::f64::consts::PI);
        let family = if (mid - std::f64::consts::FRAC_PI_2).abs() < std::f64::consts::FRAC_PI_4 {
            Family::TypeII
        } else {
            Family::TypeI
        };
        return Ok((family, (2.0 * p.omega).round() as i32, p));
    }
    let eq = parse_seed(seed, b)?;
    let start = seed_point(&ctx.coeffs, &eq, b, ctx.nodes)?;
    if g == 0.0 {
        return Ok((eq.family, eq.index, start));
    }
    let branch = continue_in_g(
        &ctx.coeffs,
        eq.family,
        eq.index,
        &start,
        &[g],
        &ContinuationOptions::default(),
    )
    .map_err(|f| HarnessError::Numeric(f.error))?;
    Ok((eq.family, eq.index, branch.last().clone()))
}

fn statics_analytic(ctx: &Context, a: &StaticsAnalyticArgs, run: &mut Run) -> Result<()> {
    let families = match &a.family {
        Some(f) => vec![parse_family(f)?],
        None => Family::ALL.to_vec(),
    };
    let eqs = enumerate_equilibria(a.b, a.a_max.unwrap_or(DEFAULT_A_MAX), &families)?;
    let rows: Vec<Vec<String>> = eqs
        .par_iter()
        .map(|e| {
            let (verdict, lambda) =
                match linearized_spectrum(&ctx.coeffs, &e.profile(ctx.nodes), a.b, 0.0, 1) {
                    Ok(r) => (r.verdict.label().to_string(), num(r.leading_eigenvalue)),
                    Err(_) => ("undetermined".to_string(), String::new()),
                };
            vec![
                e.family.to_string(),
                e.index.to_string(),
                num(e.slope),
                num(e.intercept),
                num(e.omega()),
                verdict,
                lambda,
            ]
        })
        .collect();
    let mut t = Table::new(&["family", "n", "a", "b", "omega", "stability", "lambda0"]);
    rows.into_iter().for_each(|r| t.push(r));
    run.table("equilibria.csv", &t)?;
    println!("{} equilibria at B = {}", t.rows.len(), a.b);
    Ok(())
}

fn open_db(ctx: &Context, path: &Path, run: &mut Run) -> Result<BranchDatabase> {
    let fresh = !BranchDatabase::exists(path);
    let db = BranchDatabase::open_or_create(path, ctx.coeffs, ctx.nodes)?;
    if fresh {
        run.record(db.index_path());
    }
    Ok(db)
}

fn statics_solve(ctx: &Context, a: &StaticsSolveArgs, run: &mut Run) -> Result<()> {
    let (family, index, point) = seed_start(ctx, &a.seed, a.g, a.b)?;
    let branch = Branch {
        family,
        index,
        parameter: Parameter::G,
        points: vec![point],
        terminated_by: nematic_core::statics::Termination::Bound,
    };
    let mut db = open_db(ctx, &ctx.db_path(a.branch_db.as_ref()), run)?;
    let (bi, files) = db.insert(&branch)?;
    files.into_iter().for_each(|f| run.record(f));
    let rec = &db.index.branches[bi];
    let p = &rec.points[0];
    let mut t = Table::new(&[
        "branch",
        "family",
        "n",
        "G",
        "B",
        "omega",
        "residual_norm",
        "file",
    ]);
    t.push(vec![
        rec.key.clone(),
        family.to_string(),
        index.to_string(),
        num(p.g),
        num(p.b),
        num(p.omega),
        num(p.residual_norm),
        p.file.clone(),
    ]);
    run.table("solution.csv", &t)?;
    println!(
        "{} at (G, B) = ({}, {}): omega = {:.6}",
        rec.key, a.g, a.b, p.omega
    );
    Ok(())
}

fn continue_branches(ctx: &Context, a: &ContinueArgs, run: &mut Run) -> Result<()> {
    let mut opts = ContinuationOptions::default();
    if let Some(s) = a.max_step {
        opts.max_step = s;
    }
    let results: Vec<Result<(Branch, Option<Error>)>> = a
        .seed
        .par_iter()
        .map(|seed| {
            let outcome = match a.param {
                ParamName::G => {
                    let b = a.b.ok_or_else(|| {
                        HarnessError::Usage("--B is required when continuing in G".into())
                    })?;
                    if is_file_seed(seed) {
                        let (family, index, start) = seed_start(ctx, seed, a.targets[0], b)?;
                        continue_in_g(&ctx.coeffs, family, index, &start, &a.targets, &opts)
                    } else {
                        let eq = parse_seed(seed, b)?;
                        continue_seed_in_g(&ctx.coeffs, &eq, b, &a.targets, ctx.nodes, &opts)
                    }
                }
                ParamName::B => {
                    let b0 = a.b.unwrap_or(a.targets[0]);
                    let (family, index, start) = seed_start(ctx, seed, a.g, b0)?;
                    continue_in_b(&ctx.coeffs, family, index, &start, &a.targets, &opts)
                }
            };
            match outcome {
                Ok(b) => Ok((b, None)),
                Err(f)
                    if !f.branch.points.is_empty()
                        && matches!(f.error, Error::Unreachable { .. }) =>
                {
                    Ok((f.branch, Some(f.error)))
                }
                Err(f) => Err(HarnessError::Numeric(f.error)),
            }
        })
        .collect();
    let mut db = open_db(ctx, &ctx.db_path(a.branch_db.as_ref()), run)?;
    let mut t = Table::new(&[
        "branch",
        "family",
        "n",
        "parameter",
        "from",
        "to",
        "points",
        "terminated_by",
        "note",
    ]);
    for (seed, r) in a.seed.iter().zip(results) {
        let (branch, note) = r.map_err(|e| HarnessError::stage(format!("seed {seed}"), e))?;
        let (bi, files) = db.insert(&branch)?;
        files.into_iter().for_each(|f| run.record(f));
        let rec = &db.index.branches[bi];
        t.push(vec![
            rec.key.clone(),
            rec.family.to_string(),
            rec.index.to_string(),
            rec.parameter.clone(),
            num(rec.range.0),
            num(rec.range.1),
            rec.points.len().to_string(),
            rec.terminated_by.clone(),
            note.map(|e| e.to_string()).unwrap_or_default(),
        ]);
        println!(
            "{}: {} points, {}",
            rec.key,
            rec.points.len(),
            rec.terminated_by
        );
    }
    run.table("branches.csv", &t)?;
    Ok(())
}

fn folds(ctx: &Context, a: &FoldsArgs, run: &mut Run) -> Result<()> {
    if a.pairs.contains(&0) {
        return usage("fold indices must be nonzero");
    }
    let curves = a
        .pairs
        .iter()
        .map(|&i| {
            fold_curve(
                &ctx.coeffs,
                i,
                &a.g_grid,
                a.b_start,
                a.b_max,
                ctx.nodes,
                &FoldOptions::default(),
            )
        })
        .collect::<nematic_core::Result<Vec<_>>>()?;
    let mut t = Table::new(&["index", "family", "G", "B_star", "status"]);
    for c in &curves {
        for s in &c.samples {
            t.push(vec![
                c.index.to_string(),
                c.family.to_string(),
                num(s.g),
                opt_num(s.b_star),
                if s.b_star.is_some() { "fold" } else { "none" }.into(),
            ]);
        }
    }
    run.table("folds.csv", &t)?;
    Ok(())
}

fn stability(ctx: &Context, a: &StabilityArgs, run: &mut Run) -> Result<()> {
    if a.k == 0 {
        return usage("-k must be at least 1");
    }
    let mut db = BranchDatabase::open(&ctx.resolve(&a.branch_db))?;
    let refs = db.select(a.point.as_deref())?;
    let reports = refs
        .par_iter()
        .map(|&r| {
            let rec = db.point(r);
            let profile = db.load_profile(r)?;
            linearized_spectrum(&db.index.coefficients, &profile, rec.b, rec.g, a.k)
                .map_err(|e| HarnessError::stage(format!("point {}", db.point_id(r)), e.into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header = vec!["branch_id".to_string(), "G".into(), "B".into()];
    header.extend((0..a.k).map(|j| format!("lambda_{j}")));
    header.push("verdict".into());
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for (&r, rep) in refs.iter().zip(&reports) {
        let rec = db.point(r);
        let mut row = vec![db.point_id(r), num(rec.g), num(rec.b)];
        row.extend(rep.spectrum_prefix.iter().map(|&l| num(l)));
        row.push(rep.verdict.label().into());
        t.push(row);
        db.set_stability(r, rep)?;
    }
    run.table("stability.csv", &t)?;
    println!("{} points classified", t.rows.len());
    Ok(())
}

fn asymptotics_compare(ctx: &Context, a: &AsymptoticsArgs, run: &mut Run) -> Result<()> {
    if a.g.iter().any(|g| g.is_nan() || *g <= 0.0) || a.g.windows(2).any(|w| w[1] <= w[0]) {
        return usage("--G must be a positive increasing list");
    }
    let eq = parse_seed(&a.seed, a.b)?;
    if !matches!(eq.family, Family::TypeI | Family::TypeII) {
        return usage("asymptotic comparisons need a Type I or II seed");
    }
    let opts = ContinuationOptions {
        max_step: 50.0,
        ..Default::default()
    };
    let branch =
        continue_seed_in_g(&ctx.coeffs, &eq, a.b, &a.g, ctx.nodes, &opts).map_err(|f| f.error)?;
    let correction = match a.regime {
        Regime::Small => Some(small_g_correction(&ctx.coeffs, &eq, a.b, ctx.nodes)?),
        Regime::Large => None,
    };
    let mut t = Table::new(&[
        "G",
        "sup_error",
        "left_width",
        "right_width",
        "center_width",
    ]);
    for &g in &a.g {
        let full = &branch
            .at(g)
            .ok_or_else(|| Error::Undefined(format!("branch missing G = {g}")))?
            .profile;
        let (asym, widths) = match &correction {
            Some(c) => (c.composite(g), (None, None, None)),
            None => {
                let (ls, rs) = extract_outer_states(&ctx.coeffs, full)?;
                let comp = composite_large_g(&ctx.coeffs, ls, rs, g, a.b, DEFAULT_LAYER_NODES)?;
                let wall = layer_width(&ctx.coeffs, full, 0.5).ok();
                let centre = center_width(&ctx.coeffs, full, 0.1).ok();
                (
                    comp.profile(ctx.nodes),
                    (wall.map(|w| w.0), wall.map(|w| w.1), centre),
                )
            }
        };
        run.table(&format!("full_G{g}.csv"), &profile_table(full))?;
        run.table(&format!("asymptotic_G{g}.csv"), &profile_table(&asym))?;
        t.push(vec![
            num(g),
            num(full.sup_distance(&asym)),
            opt_num(widths.0),
            opt_num(widths.1),
            opt_num(widths.2),
        ]);
    }
    run.table("comparison.csv", &t)?;
    Ok(())
}

fn parse_floats(s: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| HarnessError::Usage(format!("{what}: cannot parse {s:?}")))?;
    if v.len() != n {
        return usage(format!(
            "{what}: expected {n} comma-separated values, got {s:?}"
        ));
    }
    Ok(v)
}

pub fn parse_schedule(g: &str, b: f64, anchor_ramp: Option<&str>) -> Result<Schedule> {
    let pressure = match g.strip_prefix("ramp:") {
        Some(rest) => {
            let v = parse_floats(rest, 3, "--G ramp")?;
            Pressure::Ramp {
                g_bar: v[0],
                delta: v[1],
                t1: v[2],
            }
        }
        None => Pressure::Constant {
            g: g.parse()
                .map_err(|_| HarnessError::Usage(format!("--G: cannot parse {g:?}")))?,
        },
    };
    let anchoring = match anchor_ramp {
        Some(s) => {
            let v = parse_floats(s, 3, "--anchor-ramp")?;
            Anchoring::Ramp {
                c: v[0],
                kappa: v[1],
                t2: v[2],
                b,
            }
        }
        None => Anchoring::Robin { b },
    };
    let s = Schedule {
        pressure,
        anchoring,
        literal_lower_flux: false,
    };
    s.validate()?;
    Ok(s)
}

pub fn stepper_config(a: &StepperArgs) -> TimeStepperConfig {
    TimeStepperConfig {
        dz: a.dz,
        dt: a.dt,
        t_max: a.tmax,
        ..Default::default()
    }
}

fn evolve_one(ctx: &Context, a: &EvolveArgs, run: &mut Run) -> Result<()> {
    let (kind, c) = a
        .init
        .split_once(':')
        .ok_or_else(|| HarnessError::Usage(format!("--init {:?} is not kind:C", a.init)))?;
    let kind: InitialKind = kind
        .parse()
        .map_err(|e: Error| HarnessError::Usage(e.to_string()))?;
    let c: f64 = c
        .parse()
        .map_err(|_| HarnessError::Usage(format!("--init: bad C in {:?}", a.init)))?;
    let schedule = parse_schedule(&a.g, a.b, a.anchor_ramp.as_deref())?;
    let cfg = TimeStepperConfig {
        snapshot_every: a.snapshot_every,
        ..stepper_config(&a.stepper)
    };
    let init = make_initial(kind, c, cfg.nodes()?);
    let traj = evolve(&ctx.coeffs, &init, &schedule, &cfg)?;
    let matched = match &a.match_indices {
        Some(r) if traj.converged => {
            let cat = catalog(
                ctx,
                schedule.final_pressure(),
                a.b,
                parse_index_range(r)?,
                traj.final_profile.n_points(),
            );
            match_steady_state(&traj.final_profile, &cat, DEFAULT_MATCH_THRESHOLD)?
        }
        _ => None,
    };
    run.table("final.csv", &profile_table(&traj.final_profile))?;
    let mut rates = Table::new(&["t", "rate"]);
    for &(t, r) in &traj.rate_history {
        rates.push(vec![num(t), num(r)]);
    }
    run.table("rates.csv", &rates)?;
    if !traj.snapshots.is_empty() {
        let z = &traj.final_profile.z;
        let mut snaps = Table::new(&["t", "z", "theta"]);
        for s in &traj.snapshots {
            for (zi, th) in z.iter().zip(&s.theta) {
                snaps.push(vec![num(s.t), num(*zi), num(*th)]);
            }
        }
        run.table("snapshots.csv", &snaps)?;
    }
    run.json(
        "summary.json",
        &json!({
            "converged": traj.converged,
            "t_steady": traj.t_steady,
            "t_final": traj.t_final,
            "steps": traj.steps,
            "omega": traj.final_omega,
            "matched": matched.map(|m| m.id.to_string()),
            "match_distance": matched.map(|m| m.distance),
        }),
    )?;
    println!(
        "omega = {:.6}, converged = {}, t_steady = {:?}",
        traj.final_omega, traj.converged, traj.t_steady
    );
    Ok(())
}

pub fn outcome_row(o: &RunOutcome) -> Vec<String> {
    vec![
        num(o.parameter),
        o.matched
            .map(|m| m.to_string())
            .unwrap_or_else(|| "none".into()),
        num(o.omega),
        opt_num(o.t_steady),
        o.converged.to_string(),
    ]
}

pub const OUTCOME_HEADER: [&str; 5] = ["parameter", "outcome", "omega", "t_steady", "converged"];

fn sweep_c_star(ctx: &Context, a: &SweepCStarArgs, run: &mut Run) -> Result<()> {
    if a.count < 2 || a.c_max.is_nan() || a.c_min.is_nan() || a.c_max <= a.c_min {
        return usage("need --count ≥ 2 and --c-max > --c-min");
    }
    let cfg = stepper_config(&a.stepper);
    let upper = parse_branch_id(&a.upper)?;
    let cat = catalog(ctx, a.g, a.b, parse_index_range(&a.indices)?, cfg.nodes()?);
    let cs: Vec<f64> = (0..a.count)
        .map(|k| a.c_min + (a.c_max - a.c_min) * k as f64 / (a.count - 1) as f64)
        .collect();
    let out = sweep_initial_slope(&ctx.coeffs, a.g, a.b, &cs, &cat, &cfg)?;
    let mut t = Table::new(&OUTCOME_HEADER);
    out.iter().for_each(|o| t.push(outcome_row(o)));
    run.table("sweep.csv", &t)?;
    let mut crit = Table::new(&[
        "status",
        "c_star",
        "bracket_lo",
        "bracket_hi",
        "below",
        "above",
        "runs",
    ]);
    match experiments::sweep_bracket(&out, upper) {
        Some(br) => {
            let s = find_critical_c(&ctx.coeffs, a.g, a.b, br, upper, &cat, &cfg, a.tol)?;
            println!(
                "C* = {:.6} in ({:.6}, {:.6})",
                s.critical, s.bracket.0, s.bracket.1
            );
            crit.push(experiments::search_row("found", &s));
        }
        None => {
            println!("no bracket for {upper} in the sweep");
            crit.push(vec![
                "undefined".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                "0".into(),
            ]);
        }
    }
    run.table("critical.csv", &crit)?;
    Ok(())
}

fn sweep_t1_star(ctx: &Context, a: &SweepT1StarArgs, run: &mut Run) -> Result<()> {
    let cfg = stepper_config(&a.stepper);
    let upper = parse_branch_id(&a.upper)?;
    let range = parse_index_range(&a.indices)?;
    let mut t = Table::new(&experiments::DELAY_HEADER);
    for &b in &a.b {
        let exp = nematic_core::dynamics::DelayExperiment {
            g_bar: a.g_bar,
            delta: a.delta,
            kappa: a.kappa,
            t2: a.t2,
            b,
        };
        let cat = catalog(ctx, a.g_bar, b, range.clone(), cfg.nodes()?);
        for row in experiments::delay_rows(ctx, &exp, &a.c, a.t_hi, upper, &cat, &cfg, a.tol)? {
            t.push(row);
        }
    }
    run.table("t1_star.csv", &t)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse() {
        let e = parse_seed("I:2", 0.1).unwrap();
        assert_eq!((e.family, e.index), (Family::TypeI, 2));
        let e = parse_seed("III:0:1", 0.5).unwrap();
        assert_eq!(e.family, Family::TypeIII);
        assert!(parse_seed("V:1", 0.1).is_err());
        assert!(parse_seed("I", 0.1).is_err());
        assert_eq!(parse_seed("III:0", 2.0).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn schedules_parse() {
        let s = parse_schedule("ramp:40,5,0.5", 0.5, Some("-3,5,0")).unwrap();
        assert_eq!(s.final_pressure(), 40.0);
        assert_eq!(s.initial_flux(), -3.0);
        assert!(parse_schedule("ramp:40,5", 0.5, None).is_err());
        assert!(parse_schedule("x", 0.5, None).is_err());
    }
}
