//! Uniform-grid quadrature: the trapezoid rule on `theta_j = 2 pi j / M` is
//! exactly the discrete Fourier transform of the samples.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::weight::WeightSpec;
use crate::error::{OpucError, Result};

pub const MAX_QUADRATURE: usize = 1 << 20;
const AGREEMENT_TOL: f64 = 1e-12;

/// Quadrature size: fixed, or doubled until successive results agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    Fixed(usize),
    #[default]
    Auto,
}

impl Serialize for Quadrature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quadrature::Fixed(m) => s.serialize_u64(*m as u64),
            Quadrature::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for Quadrature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Size(usize),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Size(m) => Ok(Quadrature::Fixed(m)),
            Repr::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for Quadrature {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Quadrature::Auto);
        }
        s.parse::<usize>()
            .map(Quadrature::Fixed)
            .map_err(|_| format!("quadrature must be a power of two or \"auto\", got {s:?}"))
    }
}

/// `hat f_k = (1/M) sum_j f_j e^{-2 pi i jk/M}` for `k = 0..M`.
pub fn dft(samples: &[f64]) -> Vec<Complex64> {
    let m = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    fft.process(&mut buf);
    let scale = 1.0 / m as f64;
    for x in &mut buf {
        *x *= scale;
    }
    buf
}

/// Index `k` (possibly negative) into a DFT output of length `m`.
pub fn dft_index(k: i64, m: usize) -> usize {
    k.rem_euclid(m as i64) as usize
}

/// Largest coefficient magnitude in the middle band `[M/4, 3M/4]`, where a
/// resolved spectrum has decayed to roundoff.
pub fn tail_magnitude(spectrum: &[Complex64]) -> f64 {
    let m = spectrum.len();
    if m < 4 {
        return f64::INFINITY;
    }
    spectrum[m / 4..=3 * m / 4]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

pub(crate) fn check_fixed(m: usize, min: usize) -> Result<()> {
    if !m.is_power_of_two() {
        return Err(OpucError::Quadrature {
            m,
            reason: "must be a power of two".into(),
        });
    }
    if m < min {
        return Err(OpucError::Quadrature {
            m,
            reason: format!("must be at least {min}"),
        });
    }
    if m > MAX_QUADRATURE {
        return Err(OpucError::Quadrature {
            m,
            reason: format!("exceeds the maximum {MAX_QUADRATURE}"),
        });
    }
    Ok(())
}

/// Outcome of an adaptive transform.
pub(crate) struct Resolved<T> {
    pub value: T,
    pub m: usize,
    pub aliasing_estimate: f64,
}

/// Runs `transform` on samples of `spec`; in auto mode the grid doubles
/// from `min` until two successive outputs agree to `1e-12` (relative to
/// their largest entry) or the maximum size is reached.
pub(crate) fn resolve<F>(
    spec: &WeightSpec,
    min: usize,
    quad: Quadrature,
    mut transform: F,
) -> Result<Resolved<Vec<Complex64>>>
where
    F: FnMut(&[f64]) -> Result<(Vec<Complex64>, f64)>,
{
    let min = min.next_power_of_two().max(16);
    let fixed = match (quad, spec.fixed_grid()) {
        (Quadrature::Fixed(m), Some(g)) if m != g => {
            return Err(OpucError::Quadrature {
                m,
                reason: format!("weight is sampled on a fixed grid of {g} points"),
            })
        }
        (Quadrature::Fixed(m), _) => Some(m),
        (Quadrature::Auto, g) => g,
    };
    if let Some(m) = fixed {
        check_fixed(m, min)?;
        let (value, tail) = transform(&spec.sample(m)?)?;
        return Ok(Resolved {
            value,
            m,
            aliasing_estimate: tail,
        });
    }

    let mut m = min;
    let (mut prev, mut tail) = transform(&spec.sample(m)?)?;
    while m < MAX_QUADRATURE {
        m *= 2;
        let (next, next_tail) = transform(&spec.sample(m)?)?;
        let scale = next.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
        let diff = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prev = next;
        tail = next_tail.max(diff);
        if diff <= AGREEMENT_TOL * scale {
            break;
        }
    }
    Ok(Resolved {
        value: prev,
        m,
        aliasing_estimate: tail,
    })
}
