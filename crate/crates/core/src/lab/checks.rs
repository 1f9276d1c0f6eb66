//! Finite-truncation checks of the Baxter-type equivalences.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{BeurlingWeight, LaurentSeries};
use crate::engine::{compute_moments, levinson, Quadrature, WeightKind, WeightSpec};
use crate::error::{OpucError, Result};
use crate::lab::decay::{decay_rate, prefactor_fit, DecayFit, FitStatus, Window, ZERO_THRESHOLD};
use crate::lab::report::{BaxterReport, PartialSums, Verdict};
use crate::lab::zeros::{annulus_zeros, polynomial_from_roots, significant_part, DEFAULT_BOUNDARY_TOL};
use crate::roots::{companion_roots, horner};
use crate::scattering::{f_plus_series, log_weight_coeffs, scattering_series};

/// Multiplicative slack on implied radii.
pub const RADIUS_SLACK: f64 = 0.05;
/// `f_+ f_-` on `|z| = R` must stay above this fraction of its maximum.
pub const MODULUS_FLOOR: f64 = 1e-6;
pub const MODULUS_POINTS: usize = 1024;
/// Bernstein–Szegő coefficients past `deg p` must vanish to this level.
pub const COMPANION_TOL: f64 = 1e-10;
/// Minimum distance of a root of `p` from the unit circle.
pub const ROOT_CLEARANCE: f64 = 1e-8;
/// Smallest fitted `k` in `n^k` that counts as a polynomial prefactor.
pub const PREFACTOR_MIN_POWER: f64 = 0.5;

/// Truncation order, quadrature and fit window shared by the pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabSettings {
    pub n: usize,
    pub quadrature: Quadrature,
    pub window: Option<Window>,
}

impl LabSettings {
    pub fn new(n: usize) -> Self {
        LabSettings {
            n,
            quadrature: Quadrature::Auto,
            window: None,
        }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = Some(window);
        self
    }

    pub fn window(&self) -> Window {
        self.window.unwrap_or_else(|| Window::default_for(self.n))
    }

    fn check(&self) -> Result<Window> {
        let w = self.window();
        if self.n < 2 || w.lo > w.hi || w.hi >= self.n {
            return Err(OpucError::Lab(format!(
                "window [{}, {}] does not fit N = {}",
                w.lo, w.hi, self.n
            )));
        }
        Ok(w)
    }
}

/// Reading of a fitted sequence against `nu` with radius `R_nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// Implied radius at least `(1 + slack) R_nu`.
    Member,
    /// Implied radius at most `(1 - slack) R_nu`.
    NonMember,
    /// Implied radius within the slack of `R_nu`.
    Borderline,
    Unknown,
}

impl Membership {
    fn is_definite(self) -> bool {
        matches!(self, Membership::Member | Membership::NonMember)
    }
}

pub fn membership(fit: &DecayFit, r_nu: f64) -> Membership {
    let r = fit.implied_r;
    match fit.status {
        FitStatus::IdenticallyZero => Membership::Member,
        FitStatus::Fitted if r >= (1.0 + RADIUS_SLACK) * r_nu => Membership::Member,
        FitStatus::Fitted if r <= (1.0 - RADIUS_SLACK) * r_nu => Membership::NonMember,
        FitStatus::Fitted => Membership::Borderline,
        FitStatus::FastDecay if r >= (1.0 + RADIUS_SLACK) * r_nu => Membership::Member,
        _ => Membership::Unknown,
    }
}

/// Whether the decay radius is at least `target`; `None` when the fit
/// cannot decide.
pub fn radius_at_least(fit: &DecayFit, target: f64) -> Option<bool> {
    match fit.status {
        FitStatus::IdenticallyZero => Some(true),
        FitStatus::Fitted => Some(fit.implied_r >= target),
        FitStatus::FastDecay if fit.implied_r >= target => Some(true),
        _ => None,
    }
}

/// Exact radius, when the fit provides one.
fn exact_radius(fit: &DecayFit) -> Option<f64> {
    match fit.status {
        FitStatus::IdenticallyZero | FitStatus::Fitted => Some(fit.implied_r),
        _ => None,
    }
}

fn radii_agree(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a / b - 1.0).abs() <= RADIUS_SLACK
}

/// Running sums `sum_{n<=K} nu(n) |x_n|`, ignoring entries at roundoff level.
pub fn partial_nu_sums(x: &[Complex64], nu: &BeurlingWeight) -> Vec<f64> {
    let mut acc = 0.0;
    x.iter()
        .enumerate()
        .map(|(n, v)| {
            let a = v.norm();
            if a > ZERO_THRESHOLD {
                acc += (nu.ln_eval(n as i64) + a.ln()).exp();
            }
            acc
        })
        .collect()
}

/// `alpha_0..alpha_{N-1}` of a weight.
pub fn verblunsky(spec: &WeightSpec, settings: &LabSettings) -> Result<(Vec<Complex64>, usize)> {
    let table = compute_moments(spec, settings.n, settings.quadrature)?;
    let m = table.metadata.m;
    Ok((levinson(&table, settings.n)?.alpha, m))
}

fn alpha_fit(spec: &WeightSpec, settings: &LabSettings, window: Window) -> Result<DecayFit> {
    decay_rate(&verblunsky(spec, settings)?.0, window)
}

fn compare(
    left: (&str, &DecayFit),
    right: (&str, &DecayFit),
    r_nu: f64,
) -> Verdict {
    let (ln, lf) = left;
    let (rn, rf) = right;
    let (lm, rm) = (membership(lf, r_nu), membership(rf, r_nu));
    let verdict = if lm.is_definite() && rm.is_definite() {
        if lm == rm {
            Verdict::pass(format!("{ln} and {rn} are both {lm:?}").to_lowercase())
        } else {
            Verdict::fail(format!("{ln} is {lm:?} but {rn} is {rm:?}").to_lowercase())
        }
    } else {
        match (exact_radius(lf), exact_radius(rf)) {
            (Some(a), Some(b)) if radii_agree(a, b) => {
                Verdict::pass(format!("implied radii of {ln} and {rn} agree within 5%"))
            }
            (Some(_), Some(_)) if lm != Membership::Unknown && rm != Membership::Unknown => {
                Verdict::inconclusive(format!(
                    "{ln} is {lm:?} and {rn} is {rm:?}; radii differ by more than 5%"
                ))
            }
            _ => Verdict::inconclusive(format!("no reliable fit for {ln} or {rn}")),
        }
    };
    verdict
        .with(&format!("{ln}_membership"), lm)
        .with(&format!("{rn}_membership"), rm)
        .with_float(&format!("{ln}_implied_r"), lf.implied_r)
        .with_float(&format!("{rn}_implied_r"), rf.implied_r)
        .with_float("nu_radius", r_nu)
}

/// Fits `alpha`, `c` and `d_-` and reads the classical and crucial
/// equivalences.
pub fn baxter_check(
    id: &str,
    spec: &WeightSpec,
    nu: &BeurlingWeight,
    settings: &LabSettings,
) -> Result<BaxterReport> {
    nu.validate()?;
    let window = settings.check()?;
    let n = settings.n;
    let (alpha, m) = verblunsky(spec, settings)?;
    let c = log_weight_coeffs(spec, n, settings.quadrature)?;
    let s = scattering_series(&c, n)?;
    let c_plus: Vec<Complex64> = (0..=n as i64).map(|k| c.get(k)).collect();
    let d_minus: Vec<Complex64> = (0..=n as i64).map(|k| s.get(-k)).collect();

    let fa = decay_rate(&alpha, window)?;
    let fc = decay_rate(&c_plus, window)?;
    let fd = decay_rate(&d_minus, window)?;

    let mut report = BaxterReport::new(id, *nu, n, window);
    report.m = m;
    report.partial_sums = PartialSums {
        alpha: partial_nu_sums(&alpha, nu),
        c: partial_nu_sums(&c_plus, nu),
        d_minus: partial_nu_sums(&d_minus, nu),
    };
    let ln_r = nu.radius().ln();
    report.note_float("nu_growth_alpha", ln_r + fa.slope);
    report.note_float("nu_growth_c", ln_r + fc.slope);
    report.note_float("nu_growth_d_minus", ln_r + fd.slope);

    let r_nu = nu.radius();
    report.verdicts.baxter_classical = if nu.is_strong() {
        compare(("alpha", &fa), ("c", &fc), r_nu)
    } else {
        Verdict::not_applicable("the classical equivalence needs a weight with R = 1")
    };
    report.verdicts.crucial = compare(("alpha", &fa), ("d_minus", &fd), r_nu);
    report.fits.alpha = Some(fa);
    report.fits.c = Some(fc);
    report.fits.d_minus = Some(fd);
    Ok(report)
}

/// Checks that the product weight decays at least as fast as the slower
/// factor.
pub fn product_check(
    (id_a, a): (&str, &WeightSpec),
    (id_b, b): (&str, &WeightSpec),
    nu: &BeurlingWeight,
    settings: &LabSettings,
) -> Result<BaxterReport> {
    let window = settings.check()?;
    let product = WeightSpec::product(vec![a.clone(), b.clone()]);
    let fa = alpha_fit(a, settings, window)?;
    let fb = alpha_fit(b, settings, window)?;
    let (alpha, m) = verblunsky(&product, settings)?;
    let fp = decay_rate(&alpha, window)?;

    let mut report = BaxterReport::new(format!("{id_a}*{id_b}"), *nu, settings.n, window);
    report.m = m;
    report.partial_sums.alpha = partial_nu_sums(&alpha, nu);

    let verdict = match (exact_radius(&fa).or_else(|| lower_bound(&fa)), exact_radius(&fb).or_else(|| lower_bound(&fb))) {
        (Some(ra), Some(rb)) => {
            let target = (1.0 - RADIUS_SLACK) * ra.min(rb);
            match radius_at_least(&fp, target) {
                Some(true) => Verdict::pass("product decays at least as fast as the slower factor"),
                Some(false) => match prefactor_fit(&alpha, window) {
                    // A zero shared by both factors gives alpha_n ~ n^k R^-n,
                    // which biases the plain fit low on short windows.
                    Some(pf) if pf.power >= PREFACTOR_MIN_POWER && pf.implied_r >= target => {
                        Verdict::pass("product meets the slower factor's rate once an n^k prefactor is fitted")
                            .with("prefactor_fit", pf)
                    }
                    pf => Verdict::fail("product decays slower than both factors").with("prefactor_fit", pf),
                },
                None => Verdict::inconclusive("no reliable fit for the product"),
            }
            .with_float("target", target)
        }
        _ => Verdict::inconclusive("no reliable fit for a factor"),
    };
    report.verdicts.product = verdict
        .with(&format!("alpha_{id_a}"), fa)
        .with(&format!("alpha_{id_b}"), fb)
        .with_float("product_implied_r", fp.implied_r);
    report.fits.alpha = Some(fp);
    Ok(report)
}

fn lower_bound(fit: &DecayFit) -> Option<f64> {
    (fit.status == FitStatus::FastDecay).then_some(fit.implied_r)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim_poly(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = p
        .iter()
        .rposition(|c| c.norm() != 0.0)
        .ok_or_else(|| OpucError::Precondition("polynomial p is identically zero".into()))?;
    Ok(p[..=d].to_vec())
}

fn check_roots_off_circle(p: &[Complex64]) -> Result<()> {
    if p.len() < 2 {
        return Ok(());
    }
    for root in companion_roots(p)? {
        if (root.norm() - 1.0).abs() <= ROOT_CLEARANCE {
            return Err(OpucError::Precondition(format!(
                "p has a root {}{:+}i on the unit circle",
                root.re, root.im
            )));
        }
    }
    Ok(())
}

/// `w |p|^2` when `up` is true, `w / |p|^2` otherwise.
fn fold(spec: &WeightSpec, p: &[Complex64], up: bool) -> WeightSpec {
    let mut out = match &spec.kind {
        WeightKind::Rational {
            numerator,
            denominator,
        } => {
            if up {
                WeightSpec::rational(poly_mul(numerator, p), denominator.clone())
            } else {
                WeightSpec::rational(numerator.clone(), poly_mul(denominator, p))
            }
        }
        _ => {
            let factor = if up {
                WeightSpec::rational(p.to_vec(), vec![Complex64::new(1.0, 0.0)])
            } else {
                WeightSpec::bernstein_szego(p.to_vec())
            };
            let mut inner = spec.clone();
            inner.normalize = false;
            WeightSpec::product(vec![inner, factor])
        }
    };
    out.normalize = spec.normalize;
    out
}

/// `w / |p|^2`. Rational weights absorb `p` into the denominator.
pub fn bernstein_modify(spec: &WeightSpec, p: &[Complex64]) -> Result<WeightSpec> {
    let p = trim_poly(p)?;
    check_roots_off_circle(&p)?;
    if p.len() == 1 && p[0] == Complex64::new(1.0, 0.0) {
        return Ok(spec.clone());
    }
    Ok(fold(spec, &p, false))
}

/// `|p|^2 w`.
pub fn multiply_abs_square(spec: &WeightSpec, p: &[Complex64]) -> Result<WeightSpec> {
    let p = trim_poly(p)?;
    Ok(fold(spec, &p, true))
}

/// `max_{n >= deg p} |alpha_n|` for the weight `1 / |p|^2`.
pub fn companion_defect(p: &[Complex64], settings: &LabSettings) -> Result<f64> {
    let p = trim_poly(p)?;
    let (alpha, _) = verblunsky(&WeightSpec::bernstein_szego(p.clone()), settings)?;
    Ok(alpha
        .iter()
        .skip(p.len() - 1)
        .map(|a| a.norm())
        .fold(0.0, f64::max))
}

/// Compares the decay of the Verblunsky coefficients of `w` and `w / |p|^2`.
pub fn bernstein_check(
    id: &str,
    spec: &WeightSpec,
    p: &[Complex64],
    nu: &BeurlingWeight,
    settings: &LabSettings,
) -> Result<BaxterReport> {
    let window = settings.check()?;
    let modified = bernstein_modify(spec, p)?;
    let (alpha, m) = verblunsky(spec, settings)?;
    let fa = decay_rate(&alpha, window)?;
    let fm = alpha_fit(&modified, settings, window)?;
    let defect = companion_defect(p, settings)?;

    let mut report = BaxterReport::new(id, *nu, settings.n, window);
    report.m = m;
    report.p = trim_poly(p)?;
    report.partial_sums.alpha = partial_nu_sums(&alpha, nu);

    let verdict = if defect > COMPANION_TOL {
        Verdict::fail("coefficients of 1/|p|^2 do not vanish past deg p")
    } else {
        match (exact_radius(&fa), lower_bound(&fa)) {
            (Some(r), _) => match radius_at_least(&fm, (1.0 - RADIUS_SLACK) * r) {
                Some(true) => Verdict::pass("w/|p|^2 decays at least as fast as w"),
                Some(false) => Verdict::fail("w/|p|^2 decays slower than w"),
                None => Verdict::inconclusive("no reliable fit for w/|p|^2"),
            },
            (None, Some(r)) => match radius_at_least(&fm, (1.0 - RADIUS_SLACK) * r) {
                Some(true) => Verdict::pass("w/|p|^2 decays at least as fast as the bound for w"),
                _ => Verdict::inconclusive("w only gives a lower bound on its rate"),
            },
            _ => Verdict::inconclusive("no reliable fit for w"),
        }
    };
    // A root of p reflecting onto a zero of w cancels it and speeds up the decay.
    let rate_change = match (exact_radius(&fa), exact_radius(&fm)) {
        (Some(a), Some(b)) if radii_agree(a, b) => "unchanged",
        (Some(a), Some(b)) if b > a => "faster",
        (Some(_), Some(_)) => "slower",
        _ => "unknown",
    };
    report.verdicts.bernstein = verdict
        .with("rate_change", rate_change)
        .with_float("companion_defect", defect)
        .with_float("original_implied_r", fa.implied_r)
        .with_float("modified_implied_r", fm.implied_r)
        .with("alpha_modified", fm);
    report.fits.alpha = Some(fa);
    Ok(report)
}

/// `min |f_+ f_-| / max |f_+ f_-|` on `|z| = r`.
pub fn min_modulus_ratio(f_plus: &LaurentSeries, r: f64) -> f64 {
    let poly = significant_part(f_plus);
    let values: Vec<f64> = (0..MODULUS_POINTS)
        .map(|j| {
            let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / MODULUS_POINTS as f64);
            // f_-(z) = conj(f_+(1 / conj z)) and 1 / conj(r u) = u / r.
            (horner(&poly, u * r) * horner(&poly, u / r).conj()).norm()
        })
        .collect();
    let max = values.iter().cloned().fold(0.0, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if max > 0.0 {
        min / max
    } else {
        0.0
    }
}

/// Removes the zeros of `f_+` in `1 < |z| < R_nu` and checks that the
/// modified log-coefficients decay at the rate of `nu`.
///
/// Fails with a precondition error when `R_nu <= 1`, when the Verblunsky
/// coefficients are not in `l_nu` or when `f_+ f_-` nearly vanishes on
/// `|z| = R_nu`.
pub fn extend_baxter(
    id: &str,
    spec: &WeightSpec,
    nu: &BeurlingWeight,
    settings: &LabSettings,
) -> Result<BaxterReport> {
    let r_nu = nu.radius();
    if r_nu <= 1.0 {
        return Err(OpucError::Precondition(format!(
            "pole removal needs R > 1, got {r_nu}"
        )));
    }
    let mut report = baxter_check(id, spec, nu, settings)?;
    let window = report.window;
    let fa = report.fits.alpha.expect("alpha fit");
    let ma = membership(&fa, r_nu);
    if ma != Membership::Member {
        return Err(OpucError::Precondition(format!(
            "Verblunsky coefficients are {ma:?} in l_nu: implied R {} against R_nu {r_nu}",
            fa.implied_r
        )
        .to_lowercase()));
    }

    let n = settings.n;
    let c = log_weight_coeffs(spec, n, settings.quadrature)?;
    let f_plus = f_plus_series(&c, n)?;
    let ratio = min_modulus_ratio(&f_plus, r_nu);
    report.note_float("min_modulus_ratio", ratio);
    if ratio <= MODULUS_FLOOR {
        return Err(OpucError::Precondition(format!(
            "f_+ f_- nearly vanishes on |z| = {r_nu} (min/max = {ratio:e})"
        )));
    }

    let zeros = match annulus_zeros(&f_plus, r_nu, DEFAULT_BOUNDARY_TOL) {
        Ok(z) => z,
        Err(e @ (OpucError::BoundaryZero { .. } | OpucError::WindingMismatch { .. })) => {
            report.verdicts.extended = Verdict::inconclusive(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.note_float("winding", zeros.winding);
    report.zeros = zeros.zeros.clone();
    let p = polynomial_from_roots(&zeros.values());
    report.p = p.clone();

    let w_hat = multiply_abs_square(spec, &p)?;
    let c_hat = log_weight_coeffs(&w_hat, n, settings.quadrature)?;
    let c_hat_plus: Vec<Complex64> = (0..=n as i64).map(|k| c_hat.get(k)).collect();
    let fc = decay_rate(&c_hat_plus, window)?;
    report.fits.c_hat = Some(fc);

    let samples = w_hat.sample(c_hat.metadata.m)?;
    report.note_float("w_hat_min", samples.iter().cloned().fold(f64::INFINITY, f64::min));
    report.note_float("w_hat_max", samples.iter().cloned().fold(0.0, f64::max));

    let (alpha, _) = verblunsky(spec, settings)?;
    let (alpha_hat, _) = verblunsky(&w_hat, settings)?;
    let fa_hat = decay_rate(&alpha_hat, window)?;
    report.note("alpha_hat", fa_hat);
    let (back, _) = verblunsky(&bernstein_modify(&w_hat, &p)?, settings)?;
    let gap = alpha
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    report.note_float("roundtrip_alpha_gap", gap);

    let target = (1.0 - RADIUS_SLACK) * r_nu;
    report.verdicts.extended = match radius_at_least(&fc, target) {
        Some(true) => Verdict::pass("modified log-coefficients decay at the rate of nu"),
        Some(false) => Verdict::fail("modified log-coefficients decay slower than nu"),
        None => Verdict::inconclusive("no reliable fit for the modified log-coefficients"),
    }
    .with_float("c_hat_implied_r", fc.implied_r)
    .with_float("target", target)
    .with("zero_count", zeros.zeros.len())
    .with("alpha_membership", ma);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn nu(r: f64) -> BeurlingWeight {
        BeurlingWeight::exponential(r).unwrap()
    }

    fn bs_half() -> WeightSpec {
        WeightSpec::rational_real(&[1.0], &[1.0, -0.5])
    }

    #[test]
    fn membership_reading() {
        let fit = |r: f64, status| DecayFit {
            slope: -r.ln(),
            intercept: 0.0,
            residual: 0.0,
            window: Window::new(1, 10),
            usable_points: 10,
            implied_r: r,
            status,
        };
        assert_eq!(membership(&fit(2.0, FitStatus::Fitted), 1.5), Membership::Member);
        assert_eq!(membership(&fit(1.3, FitStatus::Fitted), 2.0), Membership::NonMember);
        assert_eq!(membership(&fit(2.0, FitStatus::Fitted), 2.0), Membership::Borderline);
        assert_eq!(membership(&fit(1.0, FitStatus::FastDecay), 2.0), Membership::Unknown);
        assert_eq!(
            membership(&fit(f64::INFINITY, FitStatus::IdenticallyZero), 9.0),
            Membership::Member
        );
        assert_eq!(membership(&fit(5.0, FitStatus::Unreliable), 2.0), Membership::Unknown);
    }

    #[test]
    fn classical_on_bernstein_szego() {
        let r = baxter_check("bs", &bs_half(), &nu(1.0), &LabSettings::new(64)).unwrap();
        assert_eq!(r.verdicts.baxter_classical.status, crate::lab::VerdictStatus::Pass);
        assert_eq!(r.verdicts.crucial.status, crate::lab::VerdictStatus::Pass);
        let fc = r.fits.c.unwrap();
        assert!((fc.implied_r - 2.0).abs() < 0.2, "{fc:?}");
        assert_eq!(r.partial_sums.alpha.len(), 64);
    }

    #[test]
    fn divergent_nu_sums() {
        // Zero of w at 1.3, nu grows like 2^n.
        let spec = WeightSpec::rational_real(&[1.0, -1.0 / 1.3], &[1.0]);
        let r = baxter_check("z", &spec, &nu(2.0), &LabSettings::new(64)).unwrap();
        assert_eq!(
            r.verdicts.baxter_classical.status,
            crate::lab::VerdictStatus::NotApplicable
        );
        assert_eq!(r.verdicts.crucial.status, crate::lab::VerdictStatus::Pass);
        let growth = r.evidence["nu_growth_alpha"].as_f64().unwrap();
        assert!(growth > 0.0);
        let s = &r.partial_sums.alpha;
        assert!(s[40] > 10.0 * s[20]);
    }

    #[test]
    fn product_of_families() {
        let a = WeightSpec::rational_real(&[1.0, -0.8], &[1.0]);
        let r = product_check(("a", &a), ("b", &bs_half()), &nu(1.0), &LabSettings::new(64)).unwrap();
        assert_eq!(r.verdicts.product.status, crate::lab::VerdictStatus::Pass);
        assert_eq!(r.weight_id, "a*b");
    }

    #[test]
    fn modify_folds_rational_and_guards_circle() {
        let w = bernstein_modify(&bs_half(), &[cx(1.0), cx(0.4)]).unwrap();
        match &w.kind {
            WeightKind::Rational { denominator, .. } => assert_eq!(denominator.len(), 3),
            other => panic!("{other:?}"),
        }
        let free = WeightSpec::constant(1.0);
        assert_eq!(bernstein_modify(&free, &[cx(1.0)]).unwrap(), free);
        assert!(bernstein_modify(&free, &[cx(1.0), cx(-1.0)]).is_err());
        assert!(bernstein_modify(&free, &[cx(0.0)]).is_err());
        assert!(matches!(
            bernstein_modify(&free, &[cx(-2.0), cx(1.0)]).unwrap().kind,
            WeightKind::Product { .. }
        ));
    }

    #[test]
    fn bernstein_keeps_rate() {
        let spec = WeightSpec::rational_real(&[1.0, -0.75, 0.125], &[1.0]);
        let p = [cx(-2.5), cx(1.0)];
        let r = bernstein_check("z", &spec, &p, &nu(1.0), &LabSettings::new(64)).unwrap();
        assert_eq!(r.verdicts.bernstein.status, crate::lab::VerdictStatus::Pass, "{:?}", r.verdicts.bernstein);
        assert!(companion_defect(&p, &LabSettings::new(32)).unwrap() < 1e-12);
        assert_eq!(r.verdicts.bernstein.evidence["rate_change"], "unchanged");
    }

    #[test]
    fn bernstein_cancellation_speeds_up() {
        // |z - 0.5|^2 = |1 - 0.5z|^2 on the circle, so the zero at 2 is removed.
        let spec = WeightSpec::rational_real(&[1.0, -0.75, 0.125], &[1.0]);
        let p = [cx(-0.5), cx(1.0)];
        let r = bernstein_check("z", &spec, &p, &nu(1.0), &LabSettings::new(64)).unwrap();
        let v = &r.verdicts.bernstein;
        assert_eq!(v.status, crate::lab::VerdictStatus::Pass, "{v:?}");
        assert_eq!(v.evidence["rate_change"], "faster");
        let rm = v.evidence["modified_implied_r"].as_f64().unwrap();
        assert!((rm - 4.0).abs() < 0.2, "{rm}");
    }

    #[test]
    fn extension_removes_single_zero() {
        let r = extend_baxter("bs", &bs_half(), &nu(3.0), &LabSettings::new(64)).unwrap();
        assert_eq!(r.zeros.len(), 1);
        assert!((r.zeros[0].value() - cx(2.0)).norm() < 1e-10);
        assert!((r.p[0] - cx(-2.0)).norm() < 1e-10 && (r.p[1] - cx(1.0)).norm() < 1e-14);
        assert_eq!(r.verdicts.extended.status, crate::lab::VerdictStatus::Pass);
        let lo = r.evidence["w_hat_min"].as_f64().unwrap();
        let hi = r.evidence["w_hat_max"].as_f64().unwrap();
        assert!((lo - 4.0).abs() < 1e-8 && (hi - 4.0).abs() < 1e-8);
        assert!(r.evidence["roundtrip_alpha_gap"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn extension_preconditions() {
        let spec = WeightSpec::rational_real(&[1.0, -0.5], &[1.0]);
        // alpha decays like 2^-n, too slow for R = 3.
        assert!(matches!(
            extend_baxter("z", &spec, &nu(3.0), &LabSettings::new(64)),
            Err(OpucError::Precondition(_))
        ));
        assert!(extend_baxter("z", &spec, &nu(1.0), &LabSettings::new(64)).is_err());
    }

    #[test]
    fn extension_with_pole_and_zero() {
        // f_+ has a zero at 2 and a pole at 5.
        let spec = WeightSpec::rational_real(&[1.0, -0.2], &[1.0, -0.5]);
        let r = extend_baxter("m", &spec, &nu(3.0), &LabSettings::new(64)).unwrap();
        assert_eq!(r.zeros.len(), 1);
        assert_eq!(r.verdicts.extended.status, crate::lab::VerdictStatus::Pass);
        let fc = r.fits.c_hat.unwrap();
        // c_hat_k = 0.2^k / k; the 1/k factor steepens the fitted slope.
        assert!(fc.implied_r > 4.5 && fc.implied_r < 6.5, "{fc:?}");
    }
}
