//! Static equilibria at arbitrary `(𝒢, 𝓑)`.

pub mod bvp;
pub mod continuation;
pub mod equilibrium;
pub mod fold;
pub mod velocity;

pub use continuation::{
    continue_in_b, continue_in_g, continue_seed_in_g, seed_point, Branch, BranchPoint,
    ContinuationFailure, ContinuationOptions, Parameter, Termination,
};
pub use equilibrium::{solve_equilibrium, solve_equilibrium_with, static_residual};
pub use fold::{
    detect_fold, fold_curve, fold_pair, fold_pair_at, FoldCurve, FoldEstimate, FoldOptions,
    FoldSample,
};
pub use velocity::{reconstruct_velocity, VelocityProfile};
