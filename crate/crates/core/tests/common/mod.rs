#![allow(dead_code)]

use num_complex::Complex64;
use opuc::algebra::LaurentSeries;
use opuc::engine::WeightSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `w = 3 + sum_{k=1..3} 2 Re(a_k e^{ik theta})` with `|a_k| <= 0.3`, so
/// `w >= 1.2` on the circle.
pub fn random_trig_poly(rng: &mut ChaCha8Rng) -> WeightSpec {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 7];
    coeffs[3] = Complex64::new(3.0, 0.0);
    for k in 1..=3 {
        let a = Complex64::from_polar(rng.gen_range(0.0..0.3), rng.gen_range(0.0..std::f64::consts::TAU));
        coeffs[3 + k] = a;
        coeffs[3 - k] = a.conj();
    }
    WeightSpec::trig_poly(LaurentSeries::new(-3, coeffs))
}

pub fn bs_half() -> WeightSpec {
    WeightSpec::rational_real(&[1.0], &[1.0, -0.5])
}

pub fn max_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `sum_k |f_k| r^k`, the scale of `f(z)` on `|z| = r`.
pub fn abs_eval(f: &LaurentSeries, r: f64) -> f64 {
    f.iter().map(|(k, v)| v.norm() * r.powi(k as i32)).sum()
}
