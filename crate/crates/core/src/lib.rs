//! Numerical laboratory for orthogonal polynomials on the unit circle.
//!
//! The crate computes Verblunsky coefficients of absolutely continuous
//! circle weights, Szegő and scattering functions, and decay diagnostics in
//! Beurling-weighted Wiener algebras, and runs finite-truncation checks of
//! Baxter-type theorems including the pole-removal construction for weights
//! with exponential decay.
//!
//! Modules, bottom up:
//! - [`algebra`]: Beurling weights, weighted norms, Laurent series algebra.
//! - [`engine`]: weight specs, moments, Levinson recursion, Szegő recurrence.
//! - [`scattering`]: Fourier coefficients of `log w`, `f_+`, `f_-` and `S`.
//! - [`lab`]: decay fits, zero finding, theorem-verification pipelines.
//! - [`cli`]: configuration files and report writers behind the `opuc` binary.

pub mod algebra;
pub mod cli;
pub mod engine;
pub mod error;
mod float_json;
pub mod lab;
pub mod roots;
pub mod scattering;

pub use error::{OpucError, Result};
