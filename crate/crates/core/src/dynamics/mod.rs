//! Time-dependent director dynamics and steady-state selection.

pub mod basin;
pub mod matching;
pub mod schedule;
pub mod stepper;

pub use basin::{
    find_critical_c, find_critical_c_at_onset, find_critical_t1, run_linear, sweep_initial_slope,
    CriticalDelay, CriticalSearch, DelayExperiment, RunOutcome,
};
pub use matching::{build_catalog, match_steady_state, BranchId, Catalog, SteadyMatch};
pub use schedule::{Anchoring, Pressure, Schedule};
pub use stepper::{
    evolve, make_initial, InitialKind, Snapshot, TimeStepperConfig, TrajectoryResult,
};
