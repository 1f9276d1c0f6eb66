//! Beurling weights: symmetric submultiplicative sequences `nu(n)` with
//! `nu(0) = 1`, `nu(n) >= 1`, and growth rate `lim nu(n)^(1/n) = R`.

use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};

/// Closed-form Beurling weight families.
///
/// Only these two families are supported, so the weight axioms hold by
/// construction for every admissible parameter choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BeurlingWeight {
    /// `nu(n) = R^|n|`.
    Exponential {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `nu(n) = (1 + |n|)^s R^|n|`.
    PolyExponential {
        #[serde(rename = "R")]
        r: f64,
        s: f64,
    },
}

impl BeurlingWeight {
    pub fn exponential(r: f64) -> Result<Self> {
        let w = BeurlingWeight::Exponential { r };
        w.validate()?;
        Ok(w)
    }

    pub fn poly_exponential(r: f64, s: f64) -> Result<Self> {
        let w = BeurlingWeight::PolyExponential { r, s };
        w.validate()?;
        Ok(w)
    }

    /// Checks `R >= 1` and `s >= 0`.
    pub fn validate(&self) -> Result<()> {
        let (r, s) = match *self {
            BeurlingWeight::Exponential { r } => (r, 0.0),
            BeurlingWeight::PolyExponential { r, s } => (r, s),
        };
        if !(r.is_finite() && r >= 1.0) {
            return Err(OpucError::Algebra(format!(
                "Beurling weight needs finite R >= 1, got {r}"
            )));
        }
        if !(s.is_finite() && s >= 0.0) {
            return Err(OpucError::Algebra(format!(
                "Beurling weight needs finite s >= 0, got {s}"
            )));
        }
        Ok(())
    }

    /// The growth rate `R`.
    pub fn radius(&self) -> f64 {
        match *self {
            BeurlingWeight::Exponential { r } | BeurlingWeight::PolyExponential { r, .. } => r,
        }
    }

    /// `R == 1`.
    pub fn is_strong(&self) -> bool {
        self.radius() == 1.0
    }

    /// `nu(n)`; may overflow to `+inf` for large `|n|`.
    pub fn eval(&self, n: i64) -> f64 {
        let k = n.unsigned_abs() as f64;
        match *self {
            BeurlingWeight::Exponential { r } => r.powf(k),
            BeurlingWeight::PolyExponential { r, s } => (1.0 + k).powf(s) * r.powf(k),
        }
    }

    /// `ln nu(n)`, finite even where `eval` overflows.
    pub fn ln_eval(&self, n: i64) -> f64 {
        let k = n.unsigned_abs() as f64;
        match *self {
            BeurlingWeight::Exponential { r } => k * r.ln(),
            BeurlingWeight::PolyExponential { r, s } => s * (1.0 + k).ln() + k * r.ln(),
        }
    }
}

/// Convenience free function mirroring [`BeurlingWeight::eval`].
pub fn nu_eval(nu: &BeurlingWeight, n: i64) -> f64 {
    nu.eval(n)
}
