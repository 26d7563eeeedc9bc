//! Command-line surface.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use nematic_core::grid::DEFAULT_NODES;

use crate::output::OUTPUT_ROOT_ENV;

#[derive(Debug, Parser)]
#[command(
    name = "nematic",
    version,
    about = "Nematic channel-flow statics, stability and dynamics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Directory receiving every run directory and the manifest log.
    #[arg(long, global = true, env = OUTPUT_ROOT_ENV, default_value = "nematic-out")]
    pub output_root: PathBuf,
    /// TOML file with keys alpha1 … alpha6 (defaults to 5CB).
    #[arg(long, global = true)]
    pub coefficients: Option<PathBuf>,
    /// Grid nodes on [-1, 1] for static solves.
    #[arg(long, global = true, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Worker threads (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

/// Parser for one pipeline stage; stage arguments never carry globals.
#[derive(Debug, Parser)]
#[command(name = "stage", no_binary_name = true)]
pub struct StageCli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Check the dissipation inequalities of the coefficient set.
    ValidateCoefficients,
    /// Enumerate zero-gradient equilibria θ = az + b.
    StaticsAnalytic(StaticsAnalyticArgs),
    /// Solve the static problem once from a seed.
    StaticsSolve(StaticsSolveArgs),
    /// Continue seeds in G or B and store the branches.
    Continue(ContinueArgs),
    /// Fold values B*_i over a G grid.
    Folds(FoldsArgs),
    /// Leading eigenvalues of stored branch points.
    Stability(StabilityArgs),
    /// Compare asymptotic approximations with full solves.
    AsymptoticsCompare(AsymptoticsArgs),
    /// Evolve one initial condition in time.
    Evolve(EvolveArgs),
    /// Final states over initial slopes C and the critical C*.
    SweepCStar(SweepCStarArgs),
    /// Critical pressure delay t1* over C and B.
    SweepT1Star(SweepT1StarArgs),
    /// Write the dataset behind one figure.
    ReproduceFigure(FigureArgs),
    /// Run a TOML pipeline of the other commands.
    RunConfig(RunConfigArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ValidateCoefficients => "validate-coefficients",
            Command::StaticsAnalytic(_) => "statics-analytic",
            Command::StaticsSolve(_) => "statics-solve",
            Command::Continue(_) => "continue",
            Command::Folds(_) => "folds",
            Command::Stability(_) => "stability",
            Command::AsymptoticsCompare(_) => "asymptotics-compare",
            Command::Evolve(_) => "evolve",
            Command::SweepCStar(_) => "sweep-c-star",
            Command::SweepT1Star(_) => "sweep-t1-star",
            Command::ReproduceFigure(_) => "reproduce-figure",
            Command::RunConfig(_) => "run-config",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StaticsAnalyticArgs {
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    /// I, II, III or IV (all families when absent).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "a-max", allow_negative_numbers = true)]
    pub a_max: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StaticsSolveArgs {
    #[arg(long = "G", allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    /// `family:index` of a zero-gradient seed or a `z,theta` CSV guess.
    #[arg(long)]
    pub seed: String,
    /// Branch database receiving the solution.
    #[arg(long = "branch-db")]
    pub branch_db: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ParamName {
    #[value(name = "G")]
    G,
    #[value(name = "B")]
    B,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ContinueArgs {
    #[arg(long, value_enum)]
    pub param: ParamName,
    /// Monotone list of parameter values.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub targets: Vec<f64>,
    /// Seeds as `family:index`, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub seed: Vec<String>,
    /// Fixed B when continuing in G; starting B when continuing in B
    /// (defaults to the first target).
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Fixed G when continuing in B.
    #[arg(long = "G", default_value_t = 0.0, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long = "branch-db")]
    pub branch_db: Option<PathBuf>,
    #[arg(long = "max-step", allow_negative_numbers = true)]
    pub max_step: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FoldsArgs {
    #[arg(
        long = "G-grid",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub g_grid: Vec<f64>,
    /// Nonzero fold indices i (pairs a_i with its partner).
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub pairs: Vec<i32>,
    /// B at which the pairs are seeded.
    #[arg(
        long = "B-start",
        default_value_t = 0.05,
        allow_negative_numbers = true
    )]
    pub b_start: f64,
    /// Largest B probed for coalescence.
    #[arg(long = "B-max", default_value_t = 2.5, allow_negative_numbers = true)]
    pub b_max: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilityArgs {
    #[arg(long = "branch-db")]
    pub branch_db: PathBuf,
    /// `family:index`, a branch key or `key/point` (all points when absent).
    #[arg(long)]
    pub point: Option<String>,
    #[arg(short = 'k', long = "k", default_value_t = 3)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Small,
    Large,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, value_enum)]
    pub regime: Regime,
    #[arg(
        long = "G",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub g: Vec<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StepperArgs {
    #[arg(long, default_value_t = 0.0125, allow_negative_numbers = true)]
    pub dz: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub dt: f64,
    #[arg(long, default_value_t = 5e3, allow_negative_numbers = true)]
    pub tmax: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    /// `constant:C`, `linear:C` or `linear_plus_half_pi:C`.
    #[arg(long, allow_hyphen_values = true)]
    pub init: String,
    /// A constant or `ramp:Ḡ,δ,t1`.
    #[arg(long = "G", allow_hyphen_values = true)]
    pub g: String,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: f64,
    /// `C,κ,t2`: prescribed flux C, then a tanh switch to Robin anchoring.
    #[arg(long = "anchor-ramp", allow_hyphen_values = true)]
    pub anchor_ramp: Option<String>,
    #[command(flatten)]
    pub stepper: StepperArgs,
    /// Record the profile every this many steps (0 disables).
    #[arg(long = "snapshot-every", default_value_t = 0)]
    pub snapshot_every: usize,
    /// Type I indices `lo..hi` to identify the final state against.
    #[arg(long = "match-indices", allow_hyphen_values = true)]
    pub match_indices: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepCStarArgs {
    #[arg(long = "G", default_value_t = 2.0, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long = "B", default_value_t = 0.1, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long = "c-min", default_value_t = -3.5 * std::f64::consts::PI, allow_negative_numbers = true)]
    pub c_min: f64,
    #[arg(long = "c-max", default_value_t = 3.5 * std::f64::consts::PI, allow_negative_numbers = true)]
    pub c_max: f64,
    #[arg(long, default_value_t = 41)]
    pub count: usize,
    /// Type I catalog indices `lo..hi`.
    #[arg(long, default_value = "-8..8", allow_hyphen_values = true)]
    pub indices: String,
    /// Branch reached above C*.
    #[arg(long, default_value = "I:0", allow_hyphen_values = true)]
    pub upper: String,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub tol: f64,
    #[command(flatten)]
    pub stepper: StepperArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepT1StarArgs {
    #[arg(long = "G-bar", default_value_t = 40.0, allow_negative_numbers = true)]
    pub g_bar: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t2: f64,
    #[arg(long = "B", value_delimiter = ',', default_values_t = [0.5, 0.8, 1.0], allow_negative_numbers = true)]
    pub b: Vec<f64>,
    #[arg(
        long = "C",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub c: Vec<f64>,
    /// Largest delay probed.
    #[arg(long = "t-hi", default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_hi: f64,
    #[arg(long, default_value = "-4..0", allow_hyphen_values = true)]
    pub indices: String,
    #[arg(long, default_value = "I:0", allow_hyphen_values = true)]
    pub upper: String,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub tol: f64,
    #[command(flatten)]
    pub stepper: StepperArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FigureId {
    #[value(name = "fig2")]
    #[serde(rename = "fig2")]
    Fig2,
    #[value(name = "fig3")]
    #[serde(rename = "fig3")]
    Fig3,
    #[value(name = "fig4")]
    #[serde(rename = "fig4")]
    Fig4,
    #[value(name = "fig5")]
    #[serde(rename = "fig5")]
    Fig5,
    #[value(name = "fig6")]
    #[serde(rename = "fig6")]
    Fig6,
    #[value(name = "fig7-landscape")]
    #[serde(rename = "fig7-landscape")]
    Fig7Landscape,
    #[value(name = "fig8")]
    #[serde(rename = "fig8")]
    Fig8,
    #[value(name = "fig7-winding")]
    #[serde(rename = "fig7-winding")]
    Fig7Winding,
    #[value(name = "fig9")]
    #[serde(rename = "fig9")]
    Fig9,
    #[value(name = "fig10")]
    #[serde(rename = "fig10")]
    Fig10,
    #[value(name = "figB1")]
    #[serde(rename = "figB1")]
    FigB1,
    #[value(name = "figB2")]
    #[serde(rename = "figB2")]
    FigB2,
}

impl FigureId {
    pub fn label(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub id: FigureId,
    /// Database with finite-G branches (fig2, fig3); built when absent.
    #[arg(long = "branch-db")]
    pub branch_db: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Re-run stages even when their recorded hash matches.
    #[arg(long)]
    pub force: bool,
}
