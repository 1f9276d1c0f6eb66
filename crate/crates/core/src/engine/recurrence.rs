use num_complex::Complex64;

use super::levinson::VerblunskySequence;
use super::weight::grid_point;
use crate::algebra::LaurentSeries;
use crate::error::{OpucError, Result};

/// Orthonormal `phi_n` and its reversal `phi_n^*(z) = z^n conj(phi_n(1/conj z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair {
    pub phi: LaurentSeries,
    pub phi_star: LaurentSeries,
    pub degree: usize,
}

impl PolynomialPair {
    /// `hat phi_n = z^{-n} phi_n`, supported on `[-n, 0]`.
    pub fn phi_hat(&self) -> LaurentSeries {
        self.phi.shift(-(self.degree as i64))
    }

    /// Leading coefficient `kappa_n = phi_n^*(0)`.
    pub fn kappa(&self) -> f64 {
        self.phi_star.get(0).re
    }

    /// Monic `Phi_n = phi_n / kappa_n`, lowest degree first.
    pub fn monic(&self) -> Vec<Complex64> {
        let k = self.kappa();
        (0..=self.degree as i64).map(|j| self.phi.get(j) / k).collect()
    }
}

/// Reversal of a degree-`n` polynomial stored on `[0, n]`.
pub fn reversed(p: &LaurentSeries, n: usize) -> LaurentSeries {
    p.restrict(0, n as i64).conj_reflect().shift(n as i64)
}

/// Runs `phi_{k+1} = rho_k^{-1} (z phi_k - conj(alpha_k) phi_k^*)` and
/// `phi_{k+1}^* = rho_k^{-1} (phi_k^* - alpha_k z phi_k)` from
/// `phi_0 = phi_0^* = 1`.
pub fn forward_recurrence(v: &VerblunskySequence, n: usize) -> Result<PolynomialPair> {
    if n > v.len() {
        return Err(OpucError::Truncation {
            requested: n,
            available: v.len(),
        });
    }
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut star = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n {
        let a = v.alpha[k];
        let inv_rho = 1.0 / v.rho[k];
        let mut next_phi = vec![Complex64::new(0.0, 0.0); k + 2];
        let mut next_star = vec![Complex64::new(0.0, 0.0); k + 2];
        for j in 0..=k {
            next_phi[j + 1] += phi[j];
            next_phi[j] -= a.conj() * star[j];
            next_star[j] += star[j];
            next_star[j + 1] -= a * phi[j];
        }
        for x in next_phi.iter_mut().chain(next_star.iter_mut()) {
            *x *= inv_rho;
        }
        phi = next_phi;
        star = next_star;
    }
    Ok(PolynomialPair {
        phi: LaurentSeries::new(0, phi),
        phi_star: LaurentSeries::new(0, star),
        degree: n,
    })
}

/// `1 / |phi_n^*(e^{i theta_j})|^2` on the `M`-point grid; approximates the
/// unit-mass weight `w / m_0`.
pub fn reconstruct_weight(v: &VerblunskySequence, n: usize, m: usize) -> Result<Vec<f64>> {
    let pair = forward_recurrence(v, n)?;
    (0..m)
        .map(|j| {
            let value = pair.phi_star.evaluate(grid_point(j, m))?;
            Ok(1.0 / value.norm_sqr())
        })
        .collect()
}
