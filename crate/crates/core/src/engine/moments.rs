use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{dft, resolve, tail_magnitude, Quadrature};
use super::weight::WeightSpec;
use crate::error::{OpucError, Result};

/// Run parameters recorded alongside computed tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub aliasing_estimate: f64,
    /// Whether the weight was rescaled to unit mass before sampling.
    pub normalized: bool,
}

/// Trigonometric moments `m_n = (1/2pi) int e^{-in theta} w(theta) d theta`
/// for `n = 0..=N`; negative moments follow from `m_{-n} = conj(m_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    #[serde(with = "super::weight::complex_list")]
    pub moments: Vec<Complex64>,
    pub metadata: TableMeta,
}

impl MomentTable {
    /// Builds a table directly from given moments (no quadrature).
    pub fn from_moments(moments: Vec<Complex64>) -> Result<Self> {
        if moments.is_empty() {
            return Err(OpucError::InvalidSpec("moment table is empty".into()));
        }
        if !(moments[0].re > 0.0) || moments[0].im.abs() > 1e-12 * moments[0].re {
            return Err(OpucError::InvalidSpec(format!(
                "m_0 must be real and positive, got {}",
                moments[0]
            )));
        }
        let n = moments.len() - 1;
        Ok(MomentTable {
            moments,
            metadata: TableMeta {
                n,
                m: 0,
                aliasing_estimate: 0.0,
                normalized: false,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `m_k` for any integer `k` within the table.
    pub fn get(&self, k: i64) -> Complex64 {
        let c = self.moments[k.unsigned_abs() as usize];
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    pub fn m0(&self) -> f64 {
        self.moments[0].re
    }
}

/// Moments `m_0..=m_N` of `spec` by uniform-grid quadrature of size
/// `M >= 8(N+1)`.
pub fn compute_moments(spec: &WeightSpec, n: usize, quad: Quadrature) -> Result<MomentTable> {
    let resolved = resolve(spec, 8 * (n + 1), quad, |samples| {
        let spectrum = dft(samples);
        let tail = tail_magnitude(&spectrum);
        Ok((spectrum[..=n].to_vec(), tail))
    })?;
    let mut moments = resolved.value;
    // Real weight: m_0 is real up to roundoff.
    moments[0] = Complex64::new(moments[0].re, 0.0);
    Ok(MomentTable {
        moments,
        metadata: TableMeta {
            n,
            m: resolved.m,
            aliasing_estimate: resolved.aliasing_estimate,
            normalized: spec.normalize,
        },
    })
}
