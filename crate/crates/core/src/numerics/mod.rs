//! Small numerical kernels shared by the solvers.

pub mod quadrature;
pub mod roots;
pub mod tridiagonal;

pub use quadrature::adaptive_simpson;
pub use roots::{bisect, scan_roots};
pub use tridiagonal::{solve_tridiagonal, symmetric_tridiagonal_eigenvalues, Tridiagonal};
