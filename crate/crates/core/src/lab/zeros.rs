//! Zeros of a truncated `f_+` in the annulus `1 < |z| < R`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::LaurentSeries;
use crate::error::{OpucError, Result};
use crate::roots::{companion_roots, horner, newton_polish, numerical_degree, winding_count};

/// Trailing coefficients below this fraction of `max |f_k|` are roundoff.
pub const SIGNIFICANCE: f64 = 1e-14;
/// Trapezoid size for each argument-principle contour.
pub const WINDING_POINTS: usize = 4096;
/// Maximum distance of a winding count from the nearest integer.
pub const WINDING_SLACK: f64 = 0.1;
/// Roots closer than this are reported as one root of higher multiplicity.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Default half-width of the ambiguous zone around `|z| = 1` and `|z| = R`.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-2;
/// Accepted `|f_+(zeta)|` relative to `||f_+||_1`.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEntry {
    pub re: f64,
    pub im: f64,
    /// `|f_+(zeta)|` on the significant part of the series.
    pub residual: f64,
}

impl ZeroEntry {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusZeros {
    /// Zeros repeated according to multiplicity, sorted by modulus.
    pub zeros: Vec<ZeroEntry>,
    /// Argument-principle count over the annulus.
    pub winding: f64,
    /// Degree of the polynomial actually searched.
    pub degree: usize,
}

impl AnnulusZeros {
    pub fn values(&self) -> Vec<Complex64> {
        self.zeros.iter().map(ZeroEntry::value).collect()
    }
}

/// Coefficients `f_0..f_d` of a plus series with roundoff-level trailing
/// terms dropped. Off-circle evaluation and root finding use this part.
pub fn significant_part(f: &LaurentSeries) -> Vec<Complex64> {
    let coeffs: Vec<Complex64> = (0..=f.hi().max(0)).map(|k| f.get(k)).collect();
    let d = numerical_degree(&coeffs, SIGNIFICANCE);
    coeffs[..=d].to_vec()
}

/// Zeros of the truncated `f_+` in `1 < |z| < R`.
///
/// Roots come from the companion matrix, are polished by Newton's method
/// and checked against an argument-principle count on `|z| = 1` and
/// `|z| = R`. Roots within `tol` of either circle make the result
/// ambiguous and are reported as an error.
pub fn annulus_zeros(f_plus: &LaurentSeries, r: f64, tol: f64) -> Result<AnnulusZeros> {
    if !f_plus.is_plus() {
        return Err(OpucError::Precondition(
            "annulus_zeros needs a series without negative-index terms".into(),
        ));
    }
    if f_plus.get(0).norm() == 0.0 {
        return Err(OpucError::Precondition("annulus_zeros needs f_+(0) != 0".into()));
    }
    if !(r > 1.0) || !(tol > 0.0) || 1.0 + tol >= r - tol {
        return Err(OpucError::Precondition(format!(
            "annulus 1 < |z| < {r} with tolerance {tol} is empty"
        )));
    }
    let poly = significant_part(f_plus);
    let degree = poly.len() - 1;
    let scale = poly.iter().map(|c| c.norm()).sum::<f64>();

    let mut found = Vec::new();
    for root in companion_roots(&poly)? {
        let polished = newton_polish(&poly, root, 60);
        let z = if horner(&poly, polished).norm() <= horner(&poly, root).norm() {
            polished
        } else {
            root
        };
        let modulus = z.norm();
        if (modulus - 1.0).abs() <= tol || (modulus - r).abs() <= tol {
            return Err(OpucError::BoundaryZero {
                re: z.re,
                im: z.im,
                modulus,
            });
        }
        if modulus > 1.0 && modulus < r {
            found.push(z);
        }
    }

    let winding = if degree == 0 {
        0.0
    } else {
        winding_count(&poly, r, WINDING_POINTS) - winding_count(&poly, 1.0, WINDING_POINTS)
    };
    if (winding - winding.round()).abs() > WINDING_SLACK || winding.round() as usize != found.len()
    {
        return Err(OpucError::WindingMismatch {
            companion: found.len(),
            winding,
        });
    }

    let zeros = cluster(found)
        .into_iter()
        .map(|z| ZeroEntry {
            re: z.re,
            im: z.im,
            residual: horner(&poly, z).norm(),
        })
        .collect::<Vec<_>>();
    if let Some(bad) = zeros.iter().find(|e| e.residual > RESIDUAL_TOL * scale) {
        return Err(OpucError::Lab(format!(
            "zero {}{:+}i has residual {:e} above {:e}",
            bad.re,
            bad.im,
            bad.residual,
            RESIDUAL_TOL * scale
        )));
    }
    Ok(AnnulusZeros {
        zeros,
        winding,
        degree,
    })
}

/// Replaces each cluster of nearby roots by copies of its centroid.
fn cluster(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    roots.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    let mut out = Vec::with_capacity(roots.len());
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..roots.len())
            .filter(|&j| !used[j] && (roots[j] - roots[i]).norm() <= CLUSTER_TOL)
            .collect();
        let centre = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
        for &j in &members {
            used[j] = true;
            out.push(centre);
        }
    }
    out
}

/// Monic `p(z) = prod_k (z - zeta_k)`, lowest degree first.
pub fn polynomial_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &zeta in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= zeta * c;
        }
        p = next;
    }
    p
}
