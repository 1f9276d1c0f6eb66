//! Named test weights with known decay rates.

use crate::engine::WeightSpec;

#[derive(Debug, Clone)]
pub struct Family {
    pub id: &'static str,
    pub spec: WeightSpec,
    /// Exact exponential decay radius of the Verblunsky coefficients.
    pub alpha_radius: f64,
}

fn family(id: &'static str, num: &[f64], den: &[f64], alpha_radius: f64) -> Family {
    Family {
        id,
        spec: WeightSpec::rational_real(num, den),
        alpha_radius,
    }
}

/// Rational weights `|q|^2 / |p|^2`. The Verblunsky coefficients decay at
/// the rate of the nearest zero of `q` outside the disk and are finitely
/// supported when `q` is constant.
pub fn builtin() -> Vec<Family> {
    vec![
        family("free", &[1.0], &[1.0], f64::INFINITY),
        family("bs_half", &[1.0], &[1.0, -0.5], f64::INFINITY),
        family("bs_minus_half", &[1.0], &[1.0, 0.5], f64::INFINITY),
        family("zero_2_4", &[1.0, -0.75, 0.125], &[1.0], 2.0),
        family("zero_1_25", &[1.0, -0.8], &[1.0], 1.25),
        family("zero_1_3", &[1.0, -1.0 / 1.3], &[1.0], 1.3),
        family("mixed", &[1.0, -0.2], &[1.0, -0.5], 5.0),
        family("zero_2_pole_2_5", &[1.0, -0.5], &[1.0, 0.4], 2.0),
    ]
}

pub fn lookup(id: &str) -> Option<Family> {
    builtin().into_iter().find(|f| f.id == id)
}
