//! Equilibria, stability and dynamics of a nematic liquid crystal in
//! pressure-driven channel flow with weak planar anchoring.

// negated comparisons double as NaN rejection
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod asymptotics;
pub mod coefficients;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod numerics;
pub mod stability;
pub mod statics;

pub use coefficients::LeslieCoefficients;
pub use error::{Error, Result};
pub use grid::GridProfile;
