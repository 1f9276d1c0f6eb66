//! Fourier coefficients of `log w`, the Szegő pieces `f_+ = 1/D_i` and
//! `f_- = D_e`, the scattering function `S = f_-/f_+`, and the prediction
//! `alpha_n ~ -conj(d_{-n-1})` read off its negative coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{exp_one_sided, LaurentSeries};
use crate::engine::{
    dft, dft_index, grid_point, resolve, tail_magnitude, Quadrature, TableMeta, VerblunskySequence,
    WeightSpec,
};
use crate::error::{OpucError, Result};
use crate::lab::decay::{least_squares, Window, ZERO_THRESHOLD};

/// Realness tolerance for `c_0` and the Hermitian symmetry of `c`.
pub const REALNESS_TOL: f64 = 1e-12;

/// `c_n = (1/2pi) int e^{-in theta} log w(theta) d theta` for `|n| <= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogWeightCoeffs {
    pub c: LaurentSeries,
    pub metadata: TableMeta,
}

impl LogWeightCoeffs {
    /// Wraps given coefficients; they must be Hermitian (`c_{-n} = conj(c_n)`).
    pub fn from_series(c: LaurentSeries) -> Result<Self> {
        let n = c.lo().unsigned_abs().max(c.hi().unsigned_abs()) as usize;
        let out = LogWeightCoeffs {
            c: c.restrict(-(n as i64), n as i64),
            metadata: TableMeta {
                n,
                m: 0,
                aliasing_estimate: 0.0,
                normalized: false,
            },
        };
        if !out.is_real() {
            return Err(OpucError::InvalidSpec(
                "log-weight coefficients must satisfy c_{-n} = conj(c_n)".into(),
            ));
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.c.hi().max(0) as usize
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.c.get(k)
    }

    /// `c_0` real and `c_{-n} = conj(c_n)` within [`REALNESS_TOL`].
    pub fn is_real(&self) -> bool {
        let n = self.degree() as i64;
        self.c.get(0).im.abs() <= REALNESS_TOL
            && (1..=n).all(|k| (self.c.get(-k) - self.c.get(k).conj()).norm() <= REALNESS_TOL)
    }

    /// `sum_{k=1..n} s c_k z^k`.
    fn positive_part(&self, n: usize, s: f64) -> LaurentSeries {
        let hi = n.min(self.degree());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); hi + 1];
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = self.c.get(k as i64) * s;
        }
        LaurentSeries::new(0, coeffs)
    }
}

/// Fourier coefficients of `log w` from pointwise logarithms of the grid
/// samples.
pub fn log_weight_coeffs(spec: &WeightSpec, n: usize, quad: Quadrature) -> Result<LogWeightCoeffs> {
    let resolved = resolve(spec, 8 * (n + 1), quad, |samples| {
        let logs: Vec<f64> = samples.iter().map(|w| w.ln()).collect();
        let spectrum = dft(&logs);
        let m = spectrum.len();
        let window: Vec<Complex64> = (-(n as i64)..=n as i64)
            .map(|k| spectrum[dft_index(k, m)])
            .collect();
        Ok((window, tail_magnitude(&spectrum)))
    })?;
    let mut coeffs = resolved.value;
    // Symmetrize away roundoff: c_0 real, c_{-k} = conj(c_k).
    let mid = n;
    coeffs[mid] = Complex64::new(coeffs[mid].re, 0.0);
    for k in 1..=n {
        let avg = (coeffs[mid + k] + coeffs[mid - k].conj()) * 0.5;
        coeffs[mid + k] = avg;
        coeffs[mid - k] = avg.conj();
    }
    Ok(LogWeightCoeffs {
        c: LaurentSeries::new(-(n as i64), coeffs).with_truncation(n),
        metadata: TableMeta {
            n,
            m: resolved.m,
            aliasing_estimate: resolved.aliasing_estimate,
            normalized: spec.normalize,
        },
    })
}

/// `f_+ = exp(-c_0/2 - sum_{k>=1} c_k z^k)` to degree `n`.
pub fn f_plus_series(c: &LogWeightCoeffs, n: usize) -> Result<LaurentSeries> {
    let g = exp_one_sided(&c.positive_part(n, -1.0), n)?;
    let scale = (-c.get(0).re / 2.0).exp();
    Ok(g.scale(Complex64::new(scale, 0.0)).with_truncation(n))
}

/// `f_- = conj_reflect(f_+)`.
pub fn f_minus_series(c: &LogWeightCoeffs, n: usize) -> Result<LaurentSeries> {
    Ok(f_plus_series(c, n)?.conj_reflect())
}

/// Internal degree multiplier for the exponentials that build `S`.
pub const OVERSAMPLING: usize = 2;

/// `S = exp(sum_{k>=1} (c_k z^k - conj(c_k) z^{-k}))` on `|k| <= n`, as the
/// product of `exp(sum c_k z^k)` and the reflection of `exp(-sum c_k z^k)`.
pub fn scattering_series(c: &LogWeightCoeffs, n: usize) -> Result<LaurentSeries> {
    let inner = OVERSAMPLING * n.max(1);
    let e_plus = exp_one_sided(&c.positive_part(inner, 1.0), inner)?;
    let e_minus = exp_one_sided(&c.positive_part(inner, -1.0), inner)?.conj_reflect();
    Ok(e_plus
        .convolve(&e_minus)
        .restrict(-(n as i64), n as i64)
        .with_truncation(n))
}

/// `tilde alpha_n = -conj(d_{-n-1})` for `n = 0..N`.
pub fn predict_alphas(s: &LaurentSeries, n: usize) -> Result<Vec<Complex64>> {
    if n > 0 && s.lo() > -(n as i64) {
        return Err(OpucError::Truncation {
            requested: n,
            available: (-s.lo()).max(0) as usize,
        });
    }
    Ok((0..n as i64).map(|k| -s.get(-k - 1).conj()).collect())
}

/// Pieces of the scattering picture for one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    pub f_plus: LaurentSeries,
    pub f_minus: LaurentSeries,
    pub s: LaurentSeries,
    pub truncation: usize,
}

impl ScatteringData {
    pub fn from_coeffs(c: &LogWeightCoeffs, n: usize) -> Result<Self> {
        let f_plus = f_plus_series(c, n)?;
        Ok(ScatteringData {
            f_minus: f_plus.conj_reflect(),
            f_plus,
            s: scattering_series(c, n)?,
            truncation: n,
        })
    }

    /// `max_j ||S(e^{i theta_j})| - 1|`.
    pub fn unimodularity_defect(&self, m: usize) -> Result<f64> {
        let mut worst = 0.0_f64;
        for j in 0..m {
            let v = self.s.evaluate(grid_point(j, m))?;
            worst = worst.max((v.norm() - 1.0).abs());
        }
        Ok(worst)
    }

    /// `max_j |w f_+ f_- - 1|` against grid samples of `w`.
    pub fn factorization_defect(&self, samples: &[f64]) -> Result<f64> {
        let m = samples.len();
        let mut worst = 0.0_f64;
        for (j, &w) in samples.iter().enumerate() {
            let z = grid_point(j, m);
            let v = self.f_plus.evaluate(z)? * self.f_minus.evaluate(z)? * w;
            worst = worst.max((v - Complex64::new(1.0, 0.0)).norm());
        }
        Ok(worst)
    }

    /// `max_j |S f_+ - f_-|` on the grid.
    pub fn quotient_defect(&self, m: usize) -> Result<f64> {
        let mut worst = 0.0_f64;
        for j in 0..m {
            let z = grid_point(j, m);
            let v = self.s.evaluate(z)? * self.f_plus.evaluate(z)? - self.f_minus.evaluate(z)?;
            worst = worst.max(v.norm());
        }
        Ok(worst)
    }
}

#[derive(Serialize)]
struct RoleSeries<'a> {
    role: &'static str,
    #[serde(flatten)]
    series: &'a LaurentSeries,
}

impl Serialize for ScatteringData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            truncation: usize,
            series: [RoleSeries<'a>; 3],
        }
        Repr {
            truncation: self.truncation,
            series: [
                RoleSeries {
                    role: "f_plus",
                    series: &self.f_plus,
                },
                RoleSeries {
                    role: "f_minus",
                    series: &self.f_minus,
                },
                RoleSeries {
                    role: "S",
                    series: &self.s,
                },
            ],
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFlag {
    Ok,
    /// Every `e_n` in the window vanishes; the error slope is `-inf`.
    ErrorIdenticallyZero,
    InsufficientData,
}

/// Log-linear slopes of `|alpha_n|` and `|e_n| = |alpha_n - tilde alpha_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorProfile {
    #[serde(with = "crate::float_json")]
    pub alpha_slope: f64,
    #[serde(with = "crate::float_json")]
    pub error_slope: f64,
    /// `error_slope / alpha_slope`.
    #[serde(with = "crate::float_json")]
    pub ratio: f64,
    pub window: Window,
    pub usable_points: usize,
    pub flag: ProfileFlag,
}

/// `|e_n|` for each `n`, where `conj(alpha_n) = -d_{-n-1} + e_n`.
pub fn error_terms(alpha: &[Complex64], alpha_tilde: &[Complex64]) -> Vec<f64> {
    alpha
        .iter()
        .zip(alpha_tilde)
        .map(|(a, t)| (a - t).norm())
        .collect()
}

/// Fits the decay of `|alpha_n|` and of the prediction error over `window`.
pub fn error_profile(
    alpha: &VerblunskySequence,
    alpha_tilde: &[Complex64],
    window: Window,
) -> Result<ErrorProfile> {
    let len = alpha.len().min(alpha_tilde.len());
    if len == 0 || window.lo > window.hi || window.hi >= len {
        return Err(OpucError::Lab(format!(
            "window [{}, {}] exceeds the {len} available coefficients",
            window.lo, window.hi
        )));
    }
    let errors = error_terms(&alpha.alpha[..len], &alpha_tilde[..len]);
    let usable = |xs: &[f64]| -> Vec<(f64, f64)> {
        (window.lo..=window.hi)
            .filter(|&n| xs[n] > ZERO_THRESHOLD)
            .map(|n| (n as f64, xs[n].ln()))
            .collect()
    };
    let alpha_points = usable(&alpha.moduli());
    let error_points = usable(&errors);
    let alpha_slope = if alpha_points.len() >= 2 {
        least_squares(&alpha_points).0
    } else {
        f64::NAN
    };
    let (error_slope, flag) = if error_points.is_empty() {
        (f64::NEG_INFINITY, ProfileFlag::ErrorIdenticallyZero)
    } else if error_points.len() < 4 {
        (f64::NAN, ProfileFlag::InsufficientData)
    } else {
        (least_squares(&error_points).0, ProfileFlag::Ok)
    };
    Ok(ErrorProfile {
        alpha_slope,
        error_slope,
        ratio: error_slope / alpha_slope,
        window,
        usable_points: error_points.len(),
        flag,
    })
}
