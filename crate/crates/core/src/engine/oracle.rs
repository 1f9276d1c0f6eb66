//! Dense Toeplitz solve for the monic orthogonal polynomial, independent of
//! the Levinson recursion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::moments::MomentTable;
use super::recurrence::{reversed, PolynomialPair};
use crate::algebra::LaurentSeries;
use crate::error::{OpucError, Result};

/// Condition numbers above this mark the oracle as unreliable.
pub const CONDITION_LIMIT: f64 = 1e12;
pub const MAX_ORACLE_DEGREE: usize = 64;

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Orthonormal pair for the unit-mass measure `w / m_0`.
    pub pair: PolynomialPair,
    /// Monic `Phi_n`, lowest degree first.
    pub monic: Vec<Complex64>,
    /// 2-norm condition number of the Toeplitz matrix `(m_{j-k})_{j,k<n}`.
    pub condition: f64,
    pub reliable: bool,
}

/// Solves `sum_{k<n} x_k <z^k, z^j> = -<z^n, z^j>` for `j < n`, where
/// `<z^k, z^j> = m_{j-k}`, and returns `Phi_n = z^n + sum_k x_k z^k`.
pub fn gram_schmidt_oracle(table: &MomentTable, n: usize) -> Result<OracleResult> {
    if n > MAX_ORACLE_DEGREE {
        return Err(OpucError::Truncation {
            requested: n,
            available: MAX_ORACLE_DEGREE,
        });
    }
    if n + 1 > table.len() {
        return Err(OpucError::Truncation {
            requested: n,
            available: table.len().saturating_sub(1),
        });
    }
    let mut monic = vec![Complex64::new(0.0, 0.0); n + 1];
    monic[n] = Complex64::new(1.0, 0.0);
    let mut condition = 1.0;
    if n > 0 {
        let gram = DMatrix::from_fn(n, n, |j, k| table.get(j as i64 - k as i64));
        let rhs = DVector::from_fn(n, |j, _| -table.get(j as i64 - n as i64));
        let sv = gram.clone().singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        let x = gram
            .lu()
            .solve(&rhs)
            .ok_or_else(|| OpucError::Lab("oracle Toeplitz matrix is singular".into()))?;
        for k in 0..n {
            monic[k] = x[k];
        }
    }
    // ||Phi_n||^2 = <Phi_n, z^n> = sum_k a_k m_{n-k}.
    let norm_sq: f64 = monic
        .iter()
        .enumerate()
        .map(|(k, &a)| a * table.get(n as i64 - k as i64))
        .sum::<Complex64>()
        .re;
    let kappa = (table.m0() / norm_sq).sqrt();
    let phi = LaurentSeries::new(0, monic.iter().map(|a| a * kappa).collect());
    let phi_star = reversed(&phi, n);
    Ok(OracleResult {
        pair: PolynomialPair {
            phi,
            phi_star,
            degree: n,
        },
        monic,
        condition,
        reliable: condition <= CONDITION_LIMIT,
    })
}
