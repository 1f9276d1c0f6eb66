//! Beurling weights, weighted sequence spaces and the truncated Laurent
//! series algebra they act on.

mod beurling;
mod laurent;

pub use beurling::{nu_eval, BeurlingWeight};
pub use laurent::{exp_one_sided, LaurentSeries, WeightedNorm, FFT_THRESHOLD};
