//! Finitely supported two-sided Laurent series `f(z) = sum_k f_k z^k`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::beurling::BeurlingWeight;
use crate::error::{OpucError, Result};

/// Shorter inputs are multiplied by direct summation, longer ones by FFT.
pub const FFT_THRESHOLD: usize = 128;

/// Dense coefficient storage over `[lo, hi]`; everything outside is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    lo: i64,
    coeffs: Vec<Complex64>,
    truncation: Option<usize>,
}

/// Result of a weighted norm that may overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightedNorm {
    Finite(f64),
    Infinite,
}

impl WeightedNorm {
    pub fn value(self) -> f64 {
        match self {
            WeightedNorm::Finite(v) => v,
            WeightedNorm::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, WeightedNorm::Finite(_))
    }
}

impl LaurentSeries {
    /// Coefficients `coeffs[i]` sit at index `lo + i`.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        LaurentSeries {
            lo,
            coeffs,
            truncation: None,
        }
    }

    pub fn from_real(lo: i64, coeffs: &[f64]) -> Self {
        Self::new(lo, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Polynomial `sum_k c_k z^k` from coefficients lowest degree first.
    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        Self::new(0, coeffs.to_vec())
    }

    pub fn zero() -> Self {
        LaurentSeries {
            lo: 0,
            coeffs: vec![Complex64::new(0.0, 0.0)],
            truncation: None,
        }
    }

    /// The unit `delta_0`.
    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        Self::new(k, vec![c])
    }

    /// Records the truncation degree used to build this series.
    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = Some(n);
        self
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// `f_k`, zero outside the stored range.
    pub fn get(&self, k: i64) -> Complex64 {
        if k < self.lo || k > self.hi() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    /// Iterates `(k, f_k)` over the stored range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    /// No nonzero coefficient at a negative index.
    pub fn is_plus(&self) -> bool {
        self.iter().all(|(k, c)| k >= 0 || c.norm_sqr() == 0.0)
    }

    /// No nonzero coefficient at a positive index.
    pub fn is_minus(&self) -> bool {
        self.iter().all(|(k, c)| k <= 0 || c.norm_sqr() == 0.0)
    }

    /// Drops exactly-zero coefficients at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.coeffs.iter().position(|c| c.norm_sqr() != 0.0);
        let last = self.coeffs.iter().rposition(|c| c.norm_sqr() != 0.0);
        match (first, last) {
            (Some(a), Some(b)) => LaurentSeries {
                lo: self.lo + a as i64,
                coeffs: self.coeffs[a..=b].to_vec(),
                truncation: self.truncation,
            },
            _ => LaurentSeries {
                truncation: self.truncation,
                ..Self::zero()
            },
        }
    }

    /// Copy with storage over exactly `[lo, hi]`, padding with zeros or cutting.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        if hi < lo {
            return Self::zero();
        }
        let coeffs = (lo..=hi).map(|k| self.get(k)).collect();
        LaurentSeries {
            lo,
            coeffs,
            truncation: self.truncation,
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum_k nu(k) |f_k|`.
    pub fn nu_norm(&self, nu: &BeurlingWeight) -> WeightedNorm {
        let mut total = 0.0_f64;
        for (k, c) in self.iter() {
            let a = c.norm();
            if a == 0.0 {
                continue;
            }
            let weight = nu.eval(k);
            let term = if weight.is_finite() {
                weight * a
            } else {
                (nu.ln_eval(k) + a.ln()).exp()
            };
            total += term;
        }
        if total.is_finite() {
            WeightedNorm::Finite(total)
        } else {
            WeightedNorm::Infinite
        }
    }

    /// `(a*b)(n) = sum_k a(k) b(n-k)`, dispatching on input length.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.len().min(other.len()) < FFT_THRESHOLD {
            self.convolve_direct(other)
        } else {
            self.convolve_fft(other)
        }
    }

    pub fn convolve_direct(&self, other: &Self) -> Self {
        let n = self.len() + other.len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentSeries::new(self.lo + other.lo, out)
    }

    pub fn convolve_fft(&self, other: &Self) -> Self {
        let n = self.len() + other.len() - 1;
        let size = n.next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        let mut a = self.coeffs.clone();
        a.resize(size, Complex64::new(0.0, 0.0));
        let mut b = other.coeffs.clone();
        b.resize(size, Complex64::new(0.0, 0.0));
        fwd.process(&mut a);
        fwd.process(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        inv.process(&mut a);
        let scale = 1.0 / size as f64;
        a.truncate(n);
        for x in &mut a {
            *x *= scale;
        }
        LaurentSeries::new(self.lo + other.lo, a)
    }

    /// `P_-`: keeps indices `n <= 0`.
    pub fn project_minus(&self) -> Self {
        let hi = self.hi().min(0);
        if hi < self.lo {
            return Self::zero();
        }
        self.restrict(self.lo, hi)
    }

    /// `P_+`: keeps indices `n >= 0`.
    pub fn project_plus(&self) -> Self {
        let lo = self.lo.max(0);
        if self.hi() < lo {
            return Self::zero();
        }
        self.restrict(lo, self.hi())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation,
        }
    }

    /// `g_k = conj(f_{-k})`, i.e. `g(z) = conj(f(1/conj z))`.
    pub fn conj_reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        LaurentSeries {
            lo: -self.hi(),
            coeffs,
            truncation: self.truncation,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        LaurentSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            truncation: self.truncation,
        }
    }

    /// `f(z)`, Horner on the nonnegative part in `z` and on the negative
    /// part in `1/z`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut plus = zero;
        for k in (self.lo.max(0)..=self.hi()).rev() {
            plus = plus * z + self.get(k);
        }
        if self.lo >= 0 {
            // Horner above started at index max(lo, 0) = lo.
            return Ok(plus * z.powi(self.lo as i32));
        }
        let has_negative = (self.lo..0).any(|k| self.get(k).norm_sqr() != 0.0);
        if !has_negative {
            return Ok(plus);
        }
        if z.norm_sqr() == 0.0 {
            return Err(OpucError::EvaluationDomain);
        }
        let w = z.inv();
        let mut minus = zero;
        for k in self.lo..=-1 {
            minus = minus * w + self.get(k);
        }
        Ok(plus + minus * w)
    }
}

/// Coefficients `g_0..g_n` of `exp(f)` for a series with `f_k = 0` when
/// `k <= 0`, via `k g_k = sum_{j=1..k} j f_j g_{k-j}`.
pub fn exp_one_sided(f: &LaurentSeries, n: usize) -> Result<LaurentSeries> {
    if let Some((k, _)) = f.iter().find(|(k, c)| *k <= 0 && c.norm_sqr() != 0.0) {
        return Err(OpucError::Algebra(format!(
            "exp_one_sided needs f_k = 0 for k <= 0, found a nonzero coefficient at index {k}"
        )));
    }
    let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
    g[0] = Complex64::new(1.0, 0.0);
    let hi = f.hi().max(0) as usize;
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(hi) {
            let fj = f.get(j as i64);
            if fj.norm_sqr() != 0.0 {
                acc += fj * g[k - j] * j as f64;
            }
        }
        g[k] = acc / k as f64;
    }
    Ok(LaurentSeries::new(0, g).with_truncation(n))
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        LaurentSeries::new(lo, (lo..=hi).map(|k| self.get(k) + rhs.get(k)).collect())
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        LaurentSeries::new(lo, (lo..=hi).map(|k| self.get(k) - rhs.get(k)).collect())
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.convolve(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    lo: i64,
    hi: i64,
    re: Vec<f64>,
    #[serde(default)]
    im: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            lo: self.lo,
            hi: self.hi(),
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: Some(self.coeffs.iter().map(|c| c.im).collect()),
            truncation: self.truncation,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = LaurentRepr::deserialize(deserializer)?;
        let len = repr.hi - repr.lo + 1;
        if len < 1 || repr.re.len() as i64 != len {
            return Err(D::Error::custom(format!(
                "laurent series: hi - lo + 1 = {len} but re has {} entries",
                repr.re.len()
            )));
        }
        let im = repr.im.unwrap_or_else(|| vec![0.0; repr.re.len()]);
        if im.len() != repr.re.len() {
            return Err(D::Error::custom("laurent series: re and im differ in length"));
        }
        let coeffs = repr
            .re
            .into_iter()
            .zip(im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        let mut series = LaurentSeries::new(repr.lo, coeffs);
        series.truncation = repr.truncation;
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &LaurentSeries, b: &LaurentSeries, tol: f64) {
        let lo = a.lo().min(b.lo());
        let hi = a.hi().max(b.hi());
        for k in lo..=hi {
            assert!(
                (a.get(k) - b.get(k)).norm() <= tol,
                "index {k}: {} vs {}",
                a.get(k),
                b.get(k)
            );
        }
    }

    #[test]
    fn nu_norm_examples() {
        let nu = BeurlingWeight::exponential(2.0).unwrap();
        assert_eq!(LaurentSeries::one().nu_norm(&nu), WeightedNorm::Finite(1.0));
        let f = LaurentSeries::from_real(-1, &[0.5, 0.0, 0.5]);
        assert_eq!(f.nu_norm(&nu), WeightedNorm::Finite(2.0));

        let coeffs: Vec<f64> = (-20i64..=20).map(|k| 4f64.powi(-(k.abs() as i32))).collect();
        let f = LaurentSeries::from_real(-20, &coeffs);
        // Direct summation oracle: 1 + 2 * sum_{k=1..20} 2^-k.
        let oracle = 1.0 + 2.0 * (1..=20).map(|k| 2f64.powi(-k)).sum::<f64>();
        assert!((f.nu_norm(&nu).value() - oracle).abs() < 1e-15);
        assert!((oracle - 2.999998).abs() < 1e-6);
    }

    #[test]
    fn nu_norm_overflow_is_reported() {
        let nu = BeurlingWeight::exponential(10.0).unwrap();
        let f = LaurentSeries::monomial(400, c(1.0));
        assert_eq!(f.nu_norm(&nu), WeightedNorm::Infinite);
        let g = LaurentSeries::monomial(400, c(1e-300));
        let v = g.nu_norm(&nu);
        assert!(v.is_finite());
        assert!((v.value() / 1e100 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn convolution_examples() {
        let b = LaurentSeries::from_real(-2, &[1.0, 2.0, 3.0]);
        assert_eq!(LaurentSeries::one().convolve(&b), b);

        let a = LaurentSeries::from_real(0, &[1.0, -0.5]);
        let b = LaurentSeries::from_real(-1, &[-0.5, 1.0]);
        let p = a.convolve(&b);
        assert_close(&p, &LaurentSeries::from_real(-1, &[-0.5, 1.25, -0.5]), 1e-15);
    }

    #[test]
    fn direct_and_fft_agree() {
        let a: Vec<Complex64> = (0..300)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let b: Vec<Complex64> = (0..200)
            .map(|k| Complex64::new((k as f64 * 0.73).cos(), -(k as f64 * 0.05).sin()))
            .collect();
        let a = LaurentSeries::new(-150, a);
        let b = LaurentSeries::new(3, b);
        let d = a.convolve_direct(&b);
        let f = a.convolve_fft(&b);
        assert_eq!(d.lo(), f.lo());
        assert_eq!(d.hi(), f.hi());
        assert_close(&d, &f, 1e-10);
    }

    #[test]
    fn projections() {
        let f = LaurentSeries::from_real(-1, &[2.0, 3.0, 4.0]);
        assert_eq!(f.project_minus(), LaurentSeries::from_real(-1, &[2.0, 3.0]));
        assert_eq!(f.project_plus(), LaurentSeries::from_real(0, &[3.0, 4.0]));
        let back = &(&f.project_plus() + &f.project_minus()) - &LaurentSeries::monomial(0, f.get(0));
        assert_close(&back, &f, 0.0);
        // Support entirely on one side.
        let g = LaurentSeries::from_real(2, &[1.0]);
        assert!(g.project_minus().is_empty());
    }

    #[test]
    fn exp_examples() {
        let e = exp_one_sided(&LaurentSeries::zero(), 5).unwrap();
        assert_close(&e, &LaurentSeries::one(), 0.0);

        // exp(-log(1 - a z)) = 1/(1 - a z).
        let a: f64 = 0.5;
        let f: Vec<f64> = (0..=8).map(|k| if k == 0 { 0.0 } else { a.powi(k) / k as f64 }).collect();
        let g = exp_one_sided(&LaurentSeries::from_real(0, &f), 8).unwrap();
        for k in 0..=8 {
            assert!((g.get(k) - c(a.powi(k as i32))).norm() < 1e-15);
        }

        let t = Complex64::new(0.3, -1.2);
        let g = exp_one_sided(&LaurentSeries::monomial(1, t), 10).unwrap();
        let mut fact = 1.0;
        for k in 0..=10 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((g.get(k) - t.powi(k as i32) / fact).norm() < 1e-14);
        }
    }

    #[test]
    fn exp_rejects_nonpositive_support() {
        assert!(exp_one_sided(&LaurentSeries::one(), 3).is_err());
        assert!(exp_one_sided(&LaurentSeries::monomial(-1, c(1.0)), 3).is_err());
    }

    #[test]
    fn conj_reflect_examples() {
        let f = LaurentSeries::from_real(0, &[1.0, -0.5]);
        assert_eq!(f.conj_reflect(), LaurentSeries::from_real(-1, &[-0.5, 1.0]));
        let g = LaurentSeries::monomial(1, Complex64::new(0.0, 1.0));
        assert_eq!(g.conj_reflect(), LaurentSeries::monomial(-1, Complex64::new(0.0, -1.0)));
        assert!(f.is_plus() && f.conj_reflect().is_minus());
    }

    #[test]
    fn evaluate_examples() {
        let z = Complex64::from_polar(1.0, 0.7);
        assert_eq!(LaurentSeries::one().evaluate(z).unwrap(), c(1.0));
        let f = LaurentSeries::from_real(0, &[1.0, -0.5]);
        assert!(f.evaluate(c(2.0)).unwrap().norm() < 1e-15);
        let g = LaurentSeries::from_real(-1, &[-0.5, 1.25, -0.5]);
        let v = g.evaluate(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        // |1 - e^{i pi/3}/2|^2 = 1.25 - cos(pi/3).
        assert!((v - c(0.75)).norm() < 1e-15);
        assert!(g.evaluate(c(0.0)).is_err());
        let shifted = LaurentSeries::from_real(2, &[1.0, 1.0]);
        assert!((shifted.evaluate(c(2.0)).unwrap() - c(12.0)).norm() < 1e-12);
    }

    #[test]
    fn json_schema() {
        let f = LaurentSeries::new(-1, vec![Complex64::new(1.0, 2.0), c(3.0)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"lo":-1,"hi":0,"re":[1.0,3.0],"im":[2.0,0.0]}"#);
        let back: LaurentSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let real_only: LaurentSeries = serde_json::from_str(r#"{"lo":0,"hi":1,"re":[1,2]}"#).unwrap();
        assert_eq!(real_only, LaurentSeries::from_real(0, &[1.0, 2.0]));
        assert!(serde_json::from_str::<LaurentSeries>(r#"{"lo":0,"hi":3,"re":[1,2]}"#).is_err());
    }
}
