//! Polynomial zeros: companion-matrix eigenvalues, Newton polishing and
//! argument-principle counting.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{OpucError, Result};

/// `p(z)` and `p'(z)` for coefficients lowest degree first.
pub fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    horner_with_derivative(coeffs, z).0
}

/// `p'(z)/p(z)`, scaled internally so large `|z|` and high degree do not
/// overflow.
pub fn log_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let d = coeffs.len().saturating_sub(1);
    if z.norm() <= 1.0 || d == 0 {
        let (p, dp) = horner_with_derivative(coeffs, z);
        return dp / p;
    }
    // p(z) = z^d q(w), w = 1/z, q(w) = sum_k c_k w^{d-k}.
    // p'(z)/p(z) = d/z - w^2 q'(w) / q(w).
    let w = z.inv();
    let reversed: Vec<Complex64> = coeffs.iter().rev().copied().collect();
    let (q, dq) = horner_with_derivative(&reversed, w);
    Complex64::new(d as f64, 0.0) * w - w * w * dq / q
}

/// Drops trailing coefficients with `|c| <= rel_tol * max |c|`.
pub fn numerical_degree(coeffs: &[Complex64], rel_tol: f64) -> usize {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    coeffs
        .iter()
        .rposition(|c| c.norm() > rel_tol * scale)
        .unwrap_or(0)
}

/// All zeros of the polynomial as eigenvalues of its companion matrix.
///
/// Trailing coefficients that are exactly zero are ignored.
pub fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = match coeffs.iter().rposition(|c| c.norm_sqr() != 0.0) {
        Some(d) => d,
        None => {
            return Err(OpucError::Lab(
                "the zero polynomial has no well-defined root set".into(),
            ))
        }
    };
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let schur = companion.schur();
    let (_, t) = schur.unpack();
    Ok((0..degree).map(|i| t[(i, i)]).collect())
}

/// Newton iteration on `p`, stopping when the step stalls.
pub fn newton_polish(coeffs: &[Complex64], start: Complex64, max_iter: usize) -> Complex64 {
    let mut z = start;
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iter {
        let (p, dp) = horner_with_derivative(coeffs, z);
        if p.norm_sqr() == 0.0 || dp.norm_sqr() == 0.0 {
            break;
        }
        let step = p / dp;
        let size = step.norm();
        if !size.is_finite() || size >= last_step {
            break;
        }
        z -= step;
        last_step = size;
        if size <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// `(1/2 pi i) oint_{|z|=r} p'/p dz` by an `m`-point trapezoid rule: the
/// number of zeros inside `|z| < r`, as a real number.
pub fn winding_count(coeffs: &[Complex64], radius: f64, m: usize) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
        acc += z * log_derivative(coeffs, z);
    }
    (acc / m as f64).re
}
