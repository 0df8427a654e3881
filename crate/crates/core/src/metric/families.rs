//! Non-minimal metric families: the two-level α and hyperbolic
//! parametrisations, the three-level `g` family, and the general spectral
//! construction `Θ = Σₙ κₙ |ψₙ⟩⟩⟨⟨ψₙ|`.

use std::f64::consts::FRAC_PI_2;

use crate::dense::RealMatrix;
use crate::error::{Error, Result};
use crate::metric::MetricSample;
use crate::model;

/// Bisection stops once the bracket is narrower than this.
const BISECTION_TOL: f64 = 1e-10;
/// Grid used to bracket the first sign change of the smallest eigenvalue.
const BRACKET_STEPS: usize = 4096;

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} is outside [0, 1]")));
    }
    Ok(())
}

fn sym2(a: f64, b: f64, d: f64) -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[a, b, b, d])
}

/// Two-level metric
/// `[[1 + r cos2α, −√(1−r²)], [−√(1−r²), 1 − r cos2α]]`, `r = √(1 − τ²)`.
/// Its eigenvalues are `1 ± √(1 − r² sin²2α)`.
pub fn metric_n2_alpha(tau: f64, alpha: f64) -> Result<MetricSample> {
    check_tau(tau)?;
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::NotPositive(format!(
            "alpha = {alpha} must lie in (0, π/2)"
        )));
    }
    let r = (1.0 - tau * tau).sqrt();
    let c = r * (2.0 * alpha).cos();
    let off = -(1.0 - r * r).sqrt();
    MetricSample::new(2, tau, sym2(1.0 + c, off, 1.0 - c))
}

/// A point of the two-level family in both parametrisations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N2FamilyPoint {
    pub nu: f64,
    pub rho: f64,
    /// Sign of the diagonal; only `+1` gives a positive metric.
    pub eps: f64,
    pub alpha: f64,
    /// `√(1 − τ²)`.
    pub r: f64,
    /// Spectral weights of the `E₊` and `E₋` ketkets reproducing the α form
    /// (`sin²α`, `cos²α`).
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

impl N2FamilyPoint {
    pub fn tau(&self) -> f64 {
        (1.0 - self.r * self.r).sqrt()
    }
}

/// Unit-determinant two-level metric
/// `[[cosh ν e^ϱ, sinh ν], [sinh ν, cosh ν e^{−ϱ}]]`, compatible with
/// `H(τ)` at `τ = −tanh ν / cosh ϱ`. Returns the sample and the family point.
pub fn metric_n2_hyperbolic(nu: f64, rho: f64) -> Result<(MetricSample, N2FamilyPoint)> {
    if !nu.is_finite() || !rho.is_finite() {
        return Err(Error::Argument("nu and rho must be finite".into()));
    }
    if nu > 0.0 {
        return Err(Error::Domain(format!(
            "nu = {nu} > 0 induces a negative time; use nu ≤ 0"
        )));
    }
    let tau = -nu.tanh() / rho.cosh();
    if tau >= 1.0 {
        return Err(Error::Domain(format!("induced tau = {tau} is not below 1")));
    }
    let (ch, sh) = (nu.cosh(), nu.sinh());
    let theta = sym2(ch * rho.exp(), sh, ch * (-rho).exp());
    let sample = MetricSample::new(2, tau, theta)?;

    let r = (1.0 - tau * tau).sqrt();
    // Normalised to unit trace/2 the diagonal is 1 ± tanh ϱ = 1 ± r cos 2α.
    let cos2a = if r > 0.0 { (rho.tanh() / r).clamp(-1.0, 1.0) } else { 0.0 };
    let alpha = 0.5 * cos2a.acos();
    let point = N2FamilyPoint {
        nu,
        rho,
        eps: 1.0,
        alpha,
        r,
        kappa_plus: alpha.sin().powi(2),
        kappa_minus: alpha.cos().powi(2),
    };
    Ok((sample, point))
}

/// Hyperbolic metric for a prescribed `τ` and asymmetry `ϱ`; requires
/// `cosh ϱ < 1/τ`.
pub fn metric_n2_hyperbolic_at(tau: f64, rho: f64) -> Result<(MetricSample, N2FamilyPoint)> {
    check_tau(tau)?;
    let reach = tau * rho.cosh();
    if reach >= 1.0 {
        return Err(Error::Domain(format!(
            "rho = {rho} exceeds rho_max = acosh(1/tau) at tau = {tau}"
        )));
    }
    metric_n2_hyperbolic(-reach.atanh(), rho)
}

/// Three-level family with free parameter `g`; `g = 1` is the minimal metric.
pub fn metric_n3_gfamily(tau: f64, g: f64) -> Result<MetricSample> {
    if !tau.is_finite() || !g.is_finite() {
        return Err(Error::Argument("tau and g must be finite".into()));
    }
    let s2 = 2f64.sqrt();
    let t2 = tau * tau;
    let off = -s2 * g * tau;
    #[rustfmt::skip]
    let theta = RealMatrix::from_row_slice(3, 3, &[
        1.0,    off,                     g * t2,
        off,    2.0 * g - 1.0 + g * t2,  off,
        g * t2, off,                     1.0,
    ]);
    MetricSample::new(3, tau, theta)
}

/// Closed-form eigenvalues of the `g` family, ascending.
pub fn n3_g_eigenvalues(tau: f64, g: f64) -> [f64; 3] {
    let t2 = tau * tau;
    let root = (4.0 * g * g * t2 + g * g - 2.0 * g + 1.0).sqrt();
    let upper = g * t2 + g + root;
    // λ₋λ₊ = (1 − gτ²)(2g − 1 − gτ²); avoids cancellation in g(1+τ²) − root.
    let lower = if upper.abs() > root {
        (1.0 - g * t2) * (2.0 * g - 1.0 - g * t2) / upper
    } else {
        g * t2 + g - root
    };
    let mut v = [lower, 1.0 - g * t2, upper];
    v.sort_by(f64::total_cmp);
    v
}

/// First time in `(0, 1]` at which the `g`-family metric stops being
/// positive definite, located by bisection on its smallest eigenvalue.
///
/// `None` if it stays positive on all of `(0, 1]`; `Some(0.0)` if it is
/// already indefinite at `τ = 0`.
pub fn positivity_boundary_n3(g: f64) -> Result<Option<f64>> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::Argument(format!("g must be positive, got {g}")));
    }
    let lowest = |tau: f64| n3_g_eigenvalues(tau, g)[0];
    if lowest(0.0) <= 0.0 {
        return Ok(Some(0.0));
    }
    let mut prev = 0.0;
    for step in 1..=BRACKET_STEPS {
        let tau = step as f64 / BRACKET_STEPS as f64;
        if lowest(tau) <= 0.0 {
            let (mut lo, mut hi) = (prev, tau);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                if lowest(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(if lowest(lo) <= 0.0 { lo } else { hi }));
        }
        prev = tau;
    }
    Ok(None)
}

/// `Θ = Σₙ κₙ |ψₙ⟩⟩⟨⟨ψₙ|` over unit-norm ketkets; `kappa[n]` weights the
/// level `Eₙ` in ascending order.
pub fn spectral_metric(n: usize, tau: f64, kappa: &[f64]) -> Result<MetricSample> {
    if kappa.len() != n {
        return Err(Error::Argument(format!(
            "expected {n} spectral weights, got {}",
            kappa.len()
        )));
    }
    if let Some(bad) = kappa.iter().find(|&&k| !(k > 0.0)) {
        return Err(Error::NotPositive(format!(
            "spectral weights must be positive, got {bad}"
        )));
    }
    let system = model::biorthogonal_system(n, tau)?;
    MetricSample::new(n, tau, weighted_projectors(&system.ketkets, kappa))
}

pub(crate) fn weighted_projectors(ketkets: &RealMatrix, kappa: &[f64]) -> RealMatrix {
    let n = ketkets.nrows();
    let mut theta = RealMatrix::zeros(n, n);
    for (c, &w) in kappa.iter().enumerate() {
        let v = ketkets.column(c);
        theta += v * v.transpose() * w;
    }
    theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{exchange, max_abs};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn alpha_family_examples() {
        let s = metric_n2_alpha(0.0, FRAC_PI_4).unwrap();
        assert!(close(&s.eigenvalues, &[1.0, 1.0], 1e-15));

        for &tau in &[0.2, 0.5, 0.9] {
            let s = metric_n2_alpha(tau, FRAC_PI_4).unwrap();
            assert!(close(&s.eigenvalues, &[1.0 - tau, 1.0 + tau], 1e-12));
        }

        let s = metric_n2_alpha(0.6, FRAC_PI_6).unwrap();
        let d = 0.52f64.sqrt();
        assert!(close(&s.eigenvalues, &[1.0 - d, 1.0 + d], 1e-12));

        assert!(matches!(metric_n2_alpha(0.5, 0.0), Err(Error::NotPositive(_))));
        assert!(matches!(metric_n2_alpha(0.5, FRAC_PI_2), Err(Error::NotPositive(_))));
    }

    #[test]
    fn alpha_family_is_compatible() {
        for &tau in &[0.1, 0.5, 0.95] {
            for &alpha in &[0.1, 0.7, 1.4] {
                let s = metric_n2_alpha(tau, alpha).unwrap();
                assert!(s.compatibility_residual().unwrap() < 1e-12);
                assert!(s.is_positive_definite());
            }
        }
    }

    #[test]
    fn hyperbolic_examples() {
        let (s, p) = metric_n2_hyperbolic(0.0, 0.0).unwrap();
        assert_eq!(s.theta, RealMatrix::identity(2, 2));
        assert_eq!(s.tau, 0.0);
        assert!((p.alpha - FRAC_PI_4).abs() < 1e-15);

        let (s, _) = metric_n2_hyperbolic(-0.8, 0.0).unwrap();
        let tau = 0.8f64.tanh();
        assert!((s.tau - tau).abs() < 1e-15);
        let ratio = s.eigenvalues[1] / s.eigenvalues[0];
        assert!((ratio - (1.0 + tau) / (1.0 - tau)).abs() < 1e-12);

        let (s, _) = metric_n2_hyperbolic(-0.5, 0.3).unwrap();
        assert!((s.eigenvalues[0] * s.eigenvalues[1] - 1.0).abs() < 1e-13);
        let (nu, rho) = (-0.5f64, 0.3f64);
        let c = nu.cosh() * rho.cosh();
        let root = (c * c - 1.0).sqrt();
        assert!(close(&s.eigenvalues, &[c - root, c + root], 1e-13));
        assert!(s.compatibility_residual().unwrap() < 1e-13);

        assert!(matches!(metric_n2_hyperbolic(0.2, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hyperbolic_matches_alpha_family() {
        let (s, p) = metric_n2_hyperbolic_at(0.6, 0.4).unwrap();
        let a = metric_n2_alpha(0.6, p.alpha).unwrap();
        let scaled = &s.theta / (s.theta.trace() / 2.0);
        assert!(max_abs(&(scaled - &a.theta)) < 1e-12);
        assert!((p.tau() - 0.6).abs() < 1e-12);

        // cosh ϱ_max = 1/τ
        let rho_max = (1.0f64 / 0.6).acosh();
        assert!(metric_n2_hyperbolic_at(0.6, rho_max * 0.999).is_ok());
        assert!(matches!(metric_n2_hyperbolic_at(0.6, rho_max * 1.001), Err(Error::Domain(_))));
    }

    #[test]
    fn g_family_examples() {
        for &tau in &[0.0, 0.3, 0.77] {
            let s = metric_n3_gfamily(tau, 1.0).unwrap();
            let want = [(1.0 - tau).powi(2), 1.0 - tau * tau, (1.0 + tau).powi(2)];
            let mut want = want.to_vec();
            want.sort_by(f64::total_cmp);
            assert!(close(&s.eigenvalues, &want, 1e-12));
        }
        let s = metric_n3_gfamily(0.0, 1.2).unwrap();
        assert!(close(&s.eigenvalues, &[1.0, 1.0, 1.4], 1e-12));

        for &g in &[0.5, 0.8, 1.0, 1.2, 2.0, -0.3] {
            for step in 0..=20 {
                let tau = step as f64 / 20.0;
                let s = metric_n3_gfamily(tau, g).unwrap();
                assert!(close(&s.eigenvalues, &n3_g_eigenvalues(tau, g), 1e-10));
                assert!(s.compatibility_residual().unwrap() < 1e-12);
            }
        }
        let tail = metric_n3_gfamily(0.95, 0.8).unwrap();
        assert!(!tail.is_positive_definite());
    }

    #[test]
    fn g_one_is_the_minimal_metric() {
        let s2 = 2f64.sqrt();
        let tri = RealMatrix::from_row_slice(3, 3, &[0.0, s2, 0.0, s2, 0.0, s2, 0.0, s2, 0.0]);
        let t = 0.4;
        let want = RealMatrix::identity(3, 3) - tri * t + exchange(3) * (t * t);
        assert!(max_abs(&(metric_n3_gfamily(t, 1.0).unwrap().theta - want)) < 1e-15);
    }

    #[test]
    fn positivity_boundaries() {
        assert_eq!(positivity_boundary_n3(1.0).unwrap(), Some(1.0));
        let t = positivity_boundary_n3(0.8).unwrap().unwrap();
        assert!((t - 0.75f64.sqrt()).abs() < 1e-9);
        let t = positivity_boundary_n3(2.0).unwrap().unwrap();
        assert!((t - 0.5f64.sqrt()).abs() < 1e-9);
        assert_eq!(positivity_boundary_n3(0.3).unwrap(), Some(0.0));
        assert!(positivity_boundary_n3(0.0).is_err());
    }

    #[test]
    fn spectral_metric_reproduces_alpha_family() {
        for &tau in &[0.2, 0.6, 0.9] {
            for &alpha in &[0.3, FRAC_PI_4, 1.2] {
                // ascending levels: E− gets cos²α, E+ gets sin²α
                let kappa = [alpha.cos().powi(2), alpha.sin().powi(2)];
                let s = spectral_metric(2, tau, &kappa).unwrap();
                let a = metric_n2_alpha(tau, alpha).unwrap();
                let scale = a.theta[(0, 1)] / s.theta[(0, 1)];
                assert!(max_abs(&(&s.theta * scale - &a.theta)) < 1e-12, "tau={tau} alpha={alpha}");
            }
        }
    }

    #[test]
    fn first_power_weights_only_match_at_quarter_pi() {
        let tau = 0.6;
        let proportional = |alpha: f64| {
            let s = spectral_metric(2, tau, &[alpha.cos(), alpha.sin()]).unwrap();
            let a = metric_n2_alpha(tau, alpha).unwrap();
            let scale = a.theta[(0, 1)] / s.theta[(0, 1)];
            max_abs(&(&s.theta * scale - &a.theta))
        };
        assert!(proportional(FRAC_PI_4) < 1e-12);
        assert!(proportional(FRAC_PI_6) > 1e-2);
    }

    #[test]
    fn equal_weights_give_minimal_metric() {
        let tau = 0.35;
        let s = spectral_metric(2, tau, &[1.0, 1.0]).unwrap();
        let want = RealMatrix::identity(2, 2) - exchange(2) * tau;
        let scaled = &s.theta / s.theta[(0, 0)];
        assert!(max_abs(&(scaled - want)) < 1e-12);
    }

    #[test]
    fn spectral_metric_errors_and_compatibility() {
        assert!(matches!(
            spectral_metric(3, 0.4, &[1.0, 0.0, 1.0]),
            Err(Error::NotPositive(_))
        ));
        assert!(matches!(spectral_metric(3, 0.4, &[1.0]), Err(Error::Argument(_))));
        let s = spectral_metric(3, 0.4, &[0.3, 1.7, 0.9]).unwrap();
        assert!(s.compatibility_residual().unwrap() < 1e-9);
        assert!(s.is_positive_definite());
    }
}
