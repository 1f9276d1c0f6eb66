//! Circle weights `w(theta)` and their samples on the uniform grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::LaurentSeries;
use crate::error::{OpucError, Result};

const REALNESS_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
/// Samples at or below this fraction of `max |w|` count as zeros of the weight.
const ZERO_TOL: f64 = 1e-13;

/// An absolutely continuous weight on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(flatten)]
    pub kind: WeightKind,
    /// Rescale so that the zeroth moment is 1.
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum WeightKind {
    /// `w(theta) = sum_k w_k e^{ik theta}` with `w_{-k} = conj(w_k)`.
    TrigPoly { coeffs: LaurentSeries },
    /// `w = |q|^2 / |p|^2` on `|z| = 1`; coefficients lowest degree first.
    Rational {
        #[serde(with = "complex_list")]
        numerator: Vec<Complex64>,
        #[serde(with = "complex_list")]
        denominator: Vec<Complex64>,
    },
    /// Pointwise product of the factors.
    Product { factors: Vec<WeightSpec> },
    /// Values on the grid `theta_j = 2 pi j / M`.
    Samples {
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<f64>>,
    },
}

pub(crate) fn grid_angle(j: usize, m: usize) -> f64 {
    2.0 * PI * j as f64 / m as f64
}

pub(crate) fn grid_point(j: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, grid_angle(j, m))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl WeightSpec {
    pub fn new(kind: WeightKind) -> Self {
        WeightSpec {
            kind,
            normalize: false,
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        self
    }

    /// `w == lambda`.
    pub fn constant(lambda: f64) -> Self {
        Self::trig_poly(LaurentSeries::from_real(0, &[lambda]))
    }

    pub fn trig_poly(coeffs: LaurentSeries) -> Self {
        Self::new(WeightKind::TrigPoly { coeffs })
    }

    /// `|q|^2 / |p|^2`.
    pub fn rational(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> Self {
        Self::new(WeightKind::Rational {
            numerator,
            denominator,
        })
    }

    /// Real-coefficient convenience form of [`WeightSpec::rational`].
    pub fn rational_real(numerator: &[f64], denominator: &[f64]) -> Self {
        let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::rational(lift(numerator), lift(denominator))
    }

    /// The Bernstein–Szegő weight `1 / |p|^2`.
    pub fn bernstein_szego(p: Vec<Complex64>) -> Self {
        Self::rational(vec![Complex64::new(1.0, 0.0)], p)
    }

    pub fn product(factors: Vec<WeightSpec>) -> Self {
        Self::new(WeightKind::Product { factors })
    }

    pub fn samples(values: Vec<f64>) -> Self {
        Self::new(WeightKind::Samples {
            re: values,
            im: None,
        })
    }

    /// `lambda * w`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = Self::product(vec![self.clone(), Self::constant(lambda)]);
        out.normalize = self.normalize;
        out
    }

    /// Grid size imposed by sampled factors, if any.
    pub fn fixed_grid(&self) -> Option<usize> {
        match &self.kind {
            WeightKind::Samples { re, .. } => Some(re.len()),
            WeightKind::Product { factors } => factors.iter().find_map(|f| f.fixed_grid()),
            _ => None,
        }
    }

    /// Structural checks independent of the grid.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            WeightKind::TrigPoly { coeffs } => {
                let scale = coeffs.max_abs().max(f64::MIN_POSITIVE);
                let bound = coeffs.lo().unsigned_abs().max(coeffs.hi().unsigned_abs()) as i64;
                for k in 0..=bound {
                    let gap = (coeffs.get(-k) - coeffs.get(k).conj()).norm();
                    if gap > HERMITIAN_TOL * scale {
                        return Err(OpucError::InvalidSpec(format!(
                            "trig_poly coefficients are not Hermitian at index {k} (gap {gap:e})"
                        )));
                    }
                }
                Ok(())
            }
            WeightKind::Rational {
                numerator,
                denominator,
            } => {
                if numerator.iter().all(|c| c.norm_sqr() == 0.0) {
                    return Err(OpucError::InvalidSpec("rational numerator is zero".into()));
                }
                if denominator.iter().all(|c| c.norm_sqr() == 0.0) {
                    return Err(OpucError::InvalidSpec("rational denominator is zero".into()));
                }
                Ok(())
            }
            WeightKind::Product { factors } => {
                if factors.is_empty() {
                    return Err(OpucError::InvalidSpec("product has no factors".into()));
                }
                let mut grid = None;
                for f in factors {
                    f.validate()?;
                    if let Some(m) = f.fixed_grid() {
                        if grid.is_some_and(|g| g != m) {
                            return Err(OpucError::InvalidSpec(
                                "product mixes sample grids of different sizes".into(),
                            ));
                        }
                        grid = Some(m);
                    }
                }
                Ok(())
            }
            WeightKind::Samples { re, im } => {
                if re.is_empty() || !re.len().is_power_of_two() {
                    return Err(OpucError::InvalidSpec(format!(
                        "samples need a power-of-two count, got {}",
                        re.len()
                    )));
                }
                if im.as_ref().is_some_and(|im| im.len() != re.len()) {
                    return Err(OpucError::InvalidSpec("samples re and im differ in length".into()));
                }
                Ok(())
            }
        }
    }

    fn raw_values(&self, m: usize) -> Result<Vec<Complex64>> {
        match &self.kind {
            WeightKind::TrigPoly { coeffs } => (0..m)
                .map(|j| coeffs.evaluate(grid_point(j, m)))
                .collect(),
            WeightKind::Rational {
                numerator,
                denominator,
            } => Ok((0..m)
                .map(|j| {
                    let z = grid_point(j, m);
                    let q = horner(numerator, z).norm_sqr();
                    let p = horner(denominator, z).norm_sqr();
                    Complex64::new(q / p, 0.0)
                })
                .collect()),
            WeightKind::Product { factors } => {
                let mut acc = vec![Complex64::new(1.0, 0.0); m];
                for f in factors {
                    let mut vals = f.raw_values(m)?;
                    if f.normalize {
                        normalize_in_place(&mut vals);
                    }
                    for (a, v) in acc.iter_mut().zip(vals) {
                        *a *= v;
                    }
                }
                Ok(acc)
            }
            WeightKind::Samples { re, im } => {
                if re.len() != m {
                    return Err(OpucError::Quadrature {
                        m,
                        reason: format!("weight is sampled on a fixed grid of {} points", re.len()),
                    });
                }
                Ok(match im {
                    Some(im) => re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect(),
                    None => re.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
                })
            }
        }
    }

    /// Real, strictly positive samples `w(theta_j)`, `j = 0..m`.
    pub fn sample(&self, m: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let mut values = self.raw_values(m)?;
        if self.normalize {
            normalize_in_place(&mut values);
        }
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut out = Vec::with_capacity(m);
        for (j, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(OpucError::NonPositiveWeight {
                    index: j,
                    theta: grid_angle(j, m),
                    value: v.re,
                });
            }
            if v.im.abs() > REALNESS_TOL * scale {
                return Err(OpucError::NonRealWeight {
                    index: j,
                    imag: v.im.abs(),
                });
            }
            if v.re <= ZERO_TOL * scale {
                return Err(OpucError::NonPositiveWeight {
                    index: j,
                    theta: grid_angle(j, m),
                    value: v.re,
                });
            }
            out.push(v.re);
        }
        Ok(out)
    }
}

fn normalize_in_place(values: &mut [Complex64]) {
    let mean = values.iter().map(|v| v.re).sum::<f64>() / values.len() as f64;
    if mean > 0.0 && mean.is_finite() {
        for v in values.iter_mut() {
            *v /= mean;
        }
    }
}

/// Coefficient lists as JSON arrays whose entries are either a real number
/// or a `[re, im]` pair.
pub(crate) mod complex_list {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(
        values: &[Complex64],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = values.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<Complex64>, D::Error> {
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        if entries.is_empty() {
            return Err(D::Error::custom("coefficient list is empty"));
        }
        Ok(entries
            .into_iter()
            .map(|e| match e {
                Entry::Real(x) => Complex64::new(x, 0.0),
                Entry::Pair([a, b]) => Complex64::new(a, b),
            })
            .collect())
    }

    /// Same encoding, but an empty list is allowed.
    pub mod optional {
        use super::*;

        pub use super::serialize;

        pub fn deserialize<'de, D: Deserializer<'de>>(
            deserializer: D,
        ) -> std::result::Result<Vec<Complex64>, D::Error> {
            let entries = Vec::<Entry>::deserialize(deserializer)?;
            Ok(entries
                .into_iter()
                .map(|e| match e {
                    Entry::Real(x) => Complex64::new(x, 0.0),
                    Entry::Pair([a, b]) => Complex64::new(a, b),
                })
                .collect())
        }
    }
}
