use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moments::{MomentTable, TableMeta};
use crate::error::{OpucError, Result};

/// Recursion stops once `|alpha_n|` gets this close to 1.
pub const DEGENERACY_MARGIN: f64 = 1e-10;

/// Verblunsky coefficients `alpha_0..alpha_{N-1}` with `rho_n` and `kappa_n`.
///
/// `kappa_n = prod_{i<n} rho_i^{-1}` is the leading coefficient of the
/// orthonormal polynomial for the unit-mass measure, so `kappa` has `N + 1`
/// entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerblunskySequence {
    #[serde(with = "super::weight::complex_list")]
    pub alpha: Vec<Complex64>,
    pub rho: Vec<f64>,
    pub kappa: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<TableMeta>,
}

impl VerblunskySequence {
    /// Builds `rho` and `kappa` from given coefficients.
    pub fn from_alpha(alpha: Vec<Complex64>) -> Result<Self> {
        let mut rho = Vec::with_capacity(alpha.len());
        let mut kappa = Vec::with_capacity(alpha.len() + 1);
        kappa.push(1.0);
        for (n, a) in alpha.iter().enumerate() {
            let modulus = a.norm();
            if !(modulus < 1.0) {
                return Err(OpucError::Degenerate { step: n, modulus });
            }
            let r = (1.0 - a.norm_sqr()).sqrt();
            rho.push(r);
            kappa.push(kappa[n] / r);
        }
        Ok(VerblunskySequence {
            alpha,
            rho,
            kappa,
            metadata: None,
        })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `|alpha_n|` as a plain vector.
    pub fn moduli(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a.norm()).collect()
    }
}

/// Levinson–Szegő recursion on monic polynomials.
///
/// Returns the coefficients together with the monic `Phi_N`, lowest degree
/// first.
pub fn levinson_with_polynomial(
    table: &MomentTable,
    n: usize,
) -> Result<(VerblunskySequence, Vec<Complex64>)> {
    if n + 1 > table.len() {
        return Err(OpucError::Truncation {
            requested: n,
            available: table.len().saturating_sub(1),
        });
    }
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    // Squared norm of Phi_k against the measure.
    let mut sigma = table.m0();
    let mut alpha = Vec::with_capacity(n);
    for k in 0..n {
        // <z Phi_k, Phi_k^*> = <z Phi_k, 1> = sum_j a_j m_{-(j+1)}.
        let pairing: Complex64 = phi
            .iter()
            .enumerate()
            .map(|(j, &a)| a * table.get(-(j as i64) - 1))
            .sum();
        let alpha_bar = pairing / sigma;
        let a = alpha_bar.conj();
        let modulus = a.norm();
        if !(modulus < 1.0 - DEGENERACY_MARGIN) {
            return Err(OpucError::Degenerate { step: k, modulus });
        }
        // Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k^*, Phi_k^*[j] = conj(Phi_k[k-j]).
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for j in 0..=k {
            next[j + 1] += phi[j];
            next[j] -= alpha_bar * phi[k - j].conj();
        }
        phi = next;
        sigma *= 1.0 - a.norm_sqr();
        alpha.push(a);
    }
    let mut seq = VerblunskySequence::from_alpha(alpha)?;
    seq.metadata = Some(TableMeta {
        n,
        ..table.metadata
    });
    Ok((seq, phi))
}

/// Verblunsky coefficients `alpha_0..alpha_{N-1}` of the moment table.
pub fn levinson(table: &MomentTable, n: usize) -> Result<VerblunskySequence> {
    levinson_with_polynomial(table, n).map(|(seq, _)| seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{compute_moments, Quadrature, WeightSpec};

    #[test]
    fn free_case() {
        let t = MomentTable::from_moments(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let v = levinson(&t, 2).unwrap();
        assert!(v.alpha.iter().all(|a| a.norm() == 0.0));
        assert_eq!(v.kappa, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn bernstein_szego_single_pole() {
        let moments = (0..=12)
            .map(|k| Complex64::new(0.5f64.powi(k) / 0.75, 0.0))
            .collect();
        let t = MomentTable::from_moments(moments).unwrap();
        let (v, phi) = levinson_with_polynomial(&t, 12).unwrap();
        assert!((v.alpha[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(v.alpha[1..].iter().all(|a| a.norm() < 1e-14));
        // Phi_12 = z^11 (z - 0.5).
        assert!((phi[12] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((phi[11] + Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cosine_weight_first_step() {
        let t = MomentTable::from_moments(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.5, 0.0),
        ])
        .unwrap();
        let (v, phi) = levinson_with_polynomial(&t, 1).unwrap();
        assert!((v.alpha[0].re - 0.25).abs() < 1e-15);
        assert!((phi[0].re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_table_is_rejected() {
        // Moments of a point mass at z = 1: every Toeplitz matrix is singular.
        let t = MomentTable::from_moments(vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        match levinson(&t, 3) {
            Err(OpucError::Degenerate { step, .. }) => assert_eq!(step, 0),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn requesting_too_many_coefficients() {
        let t = MomentTable::from_moments(vec![Complex64::new(1.0, 0.0); 1]).unwrap();
        assert!(matches!(levinson(&t, 3), Err(OpucError::Truncation { .. })));
    }

    #[test]
    fn scale_invariance() {
        let w = WeightSpec::rational_real(&[1.0, 0.3, -0.2], &[1.0, 0.4]);
        let a = levinson(&compute_moments(&w, 24, Quadrature::Auto).unwrap(), 24).unwrap();
        let b = levinson(&compute_moments(&w.scaled(7.5), 24, Quadrature::Auto).unwrap(), 24)
            .unwrap();
        for (x, y) in a.alpha.iter().zip(&b.alpha) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn kappa_is_product_of_inverse_rhos() {
        let v = VerblunskySequence::from_alpha(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.3),
        ])
        .unwrap();
        for n in 0..2 {
            assert!((v.rho[n] - v.kappa[n] / v.kappa[n + 1]).abs() < 1e-15);
        }
        assert!(VerblunskySequence::from_alpha(vec![Complex64::new(1.0, 0.0)]).is_err());
    }
}
