//! Log-linear decay fits `|x_n| ~ C e^{slope n}` over an index window.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};

/// Entries at or below this magnitude are treated as exact zeros.
pub const ZERO_THRESHOLD: f64 = 1e-14;
/// Fits with an RMS log-residual above this are flagged unreliable.
pub const RESIDUAL_LIMIT: f64 = 1.0;
pub const MIN_POINTS: usize = 4;

/// Inclusive index range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: usize,
    pub hi: usize,
}

impl Window {
    pub fn new(lo: usize, hi: usize) -> Self {
        Window { lo, hi }
    }

    /// `[max(1, N/8), min(N-1, 5N/8)]`, i.e. `[8, 40]` at `N = 64`.
    pub fn default_for(n: usize) -> Self {
        let lo = (n / 8).max(1);
        let hi = (5 * n / 8).min(n.saturating_sub(1)).max(lo);
        Window { lo, hi }
    }

    pub fn clamp_to(self, len: usize) -> Self {
        let hi = self.hi.min(len.saturating_sub(1));
        Window {
            lo: self.lo.min(hi),
            hi,
        }
    }
}

impl std::str::FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("window must look like lo:hi, got {s:?}"))?;
        let lo = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
        let hi = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
        if hi < lo {
            return Err(format!("window end {hi} is before start {lo}"));
        }
        Ok(Window { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Fitted,
    /// Residual above [`RESIDUAL_LIMIT`].
    Unreliable,
    /// Every entry in the window is below [`ZERO_THRESHOLD`].
    IdenticallyZero,
    /// Fewer than [`MIN_POINTS`] usable entries, after which the sequence
    /// drops below the threshold; `implied_r` is then a lower bound.
    FastDecay,
    /// Fewer than [`MIN_POINTS`] usable entries.
    InsufficientData,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    #[serde(with = "crate::float_json")]
    pub slope: f64,
    #[serde(with = "crate::float_json")]
    pub intercept: f64,
    #[serde(with = "crate::float_json")]
    pub residual: f64,
    pub window: Window,
    pub usable_points: usize,
    /// `e^{-slope}`; `inf` for identically zero data.
    #[serde(with = "crate::float_json")]
    pub implied_r: f64,
    pub status: FitStatus,
}

impl DecayFit {
    /// The fit can be used as evidence of a decay rate.
    pub fn is_trustworthy(&self) -> bool {
        matches!(
            self.status,
            FitStatus::Fitted | FitStatus::IdenticallyZero | FitStatus::FastDecay
        )
    }
}

/// Ordinary least squares `y = slope x + intercept`; returns the RMS
/// residual as the third component.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits the decay of `|x_n|` over `window`.
pub fn decay_rate_abs(x: &[f64], window: Window) -> Result<DecayFit> {
    if x.is_empty() || window.lo >= x.len() || window.hi < window.lo {
        return Err(OpucError::Lab(format!(
            "window [{}, {}] does not fit a sequence of length {}",
            window.lo,
            window.hi,
            x.len()
        )));
    }
    let window = window.clamp_to(x.len());
    let points: Vec<(f64, f64)> = (window.lo..=window.hi)
        .filter(|&n| x[n].abs() > ZERO_THRESHOLD)
        .map(|n| (n as f64, x[n].abs().ln()))
        .collect();
    let base = DecayFit {
        slope: f64::NAN,
        intercept: f64::NAN,
        residual: f64::NAN,
        window,
        usable_points: points.len(),
        implied_r: f64::NAN,
        status: FitStatus::InsufficientData,
    };
    if points.is_empty() {
        return Ok(DecayFit {
            slope: f64::NEG_INFINITY,
            implied_r: f64::INFINITY,
            residual: 0.0,
            status: FitStatus::IdenticallyZero,
            ..base
        });
    }
    if points.len() < MIN_POINTS {
        let last = points[points.len() - 1].0 as usize;
        if last < window.hi {
            // Drops to the zero threshold by index `last + 1`.
            let (n0, y0) = points[0];
            let drop = y0 - ZERO_THRESHOLD.ln();
            let span = (last + 1) as f64 - n0;
            let slope = -drop / span;
            return Ok(DecayFit {
                slope,
                implied_r: (-slope).exp(),
                status: FitStatus::FastDecay,
                ..base
            });
        }
        return Ok(base);
    }
    let (slope, intercept, residual) = least_squares(&points);
    Ok(DecayFit {
        slope,
        intercept,
        residual,
        implied_r: (-slope).exp(),
        status: if residual > RESIDUAL_LIMIT {
            FitStatus::Unreliable
        } else {
            FitStatus::Fitted
        },
        ..base
    })
}

/// Fits the decay of `|x_n|` for complex data.
pub fn decay_rate(x: &[Complex64], window: Window) -> Result<DecayFit> {
    let abs: Vec<f64> = x.iter().map(|c| c.norm()).collect();
    decay_rate_abs(&abs, window)
}

/// Fit of `|x_n| ~ C n^power e^{slope n}`, used when a repeated singularity
/// puts a polynomial factor in front of the geometric decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefactorFit {
    #[serde(with = "crate::float_json")]
    pub slope: f64,
    #[serde(with = "crate::float_json")]
    pub power: f64,
    #[serde(with = "crate::float_json")]
    pub residual: f64,
    pub usable_points: usize,
    #[serde(with = "crate::float_json")]
    pub implied_r: f64,
}

/// Least squares on `(n, ln n, ln|x_n|)`. `None` with fewer than
/// `MIN_POINTS + 1` usable entries (index 0 is never usable).
pub fn prefactor_fit(x: &[Complex64], window: Window) -> Option<PrefactorFit> {
    if x.is_empty() {
        return None;
    }
    let window = window.clamp_to(x.len());
    let rows: Vec<(f64, f64)> = (window.lo.max(1)..=window.hi)
        .filter(|&n| x[n].norm() > ZERO_THRESHOLD)
        .map(|n| (n as f64, x[n].norm().ln()))
        .collect();
    if rows.len() < MIN_POINTS + 1 {
        return None;
    }
    let a = nalgebra::DMatrix::from_fn(rows.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => rows[i].0,
        _ => rows[i].0.ln(),
    });
    let y = nalgebra::DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let coef = a.clone().svd(true, true).solve(&y, 1e-12).ok()?;
    let rss = (&a * &coef - &y).norm_squared();
    Some(PrefactorFit {
        slope: coef[1],
        power: coef[2],
        residual: (rss / rows.len() as f64).sqrt(),
        usable_points: rows.len(),
        implied_r: (-coef[1]).exp(),
    })
}
