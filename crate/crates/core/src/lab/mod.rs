//! Decay fits, zero finding and the theorem-verification pipelines.

pub mod checks;
pub mod decay;
pub mod families;
pub mod report;
pub mod zeros;

pub use checks::{
    baxter_check, bernstein_check, bernstein_modify, extend_baxter, membership, product_check,
    LabSettings, Membership,
};
pub use decay::{decay_rate, decay_rate_abs, DecayFit, FitStatus, Window};
pub use report::{BaxterReport, Verdict, VerdictStatus, Verdicts};
pub use zeros::{annulus_zeros, AnnulusZeros, ZeroEntry};
