//! Moments of the running maximum `m_s`.
//!
//! The closed forms come from the density `p(m)` in [`crate::dist`]. Writing
//! `e^{θm} φ(m) = e^{θ²/2} φ(m-θ)` turns the moment generating function into
//! `e^{θ²/2}·G(θ)` with `G` a Gaussian-weighted integral that stays O(1).

use std::f64::consts::PI;

use crate::dist::density_at;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, QuadratureSpec};
use crate::special::{pdf_mul_cdf, std_normal_pdf};
use crate::timewarp::warp;

/// Coefficients of the three density terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConstants {
    pub lambda: f64,
    pub mu: f64,
    pub gamma: f64,
    pub sbar: f64,
}

impl MomentConstants {
    pub fn new(s: f64) -> Result<Self> {
        let sbar = warp(s)?;
        Ok(Self {
            lambda: 2.0 / (1.0 + sbar),
            mu: 2.0 * sbar / (1.0 + sbar),
            gamma: 2.0 * sbar.sqrt() / (1.0 + sbar),
            sbar,
        })
    }
}

fn require_positive_horizon(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("horizon {s} outside (0, 1]")));
    }
    Ok(())
}

/// `E[exp(θ m_s)]`, for `|θ| ≤ 20`.
pub fn mgf(theta: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    require_positive_horizon(s)?;
    if !(theta.abs() <= 20.0) {
        return Err(Error::domain(format!("|θ| must be at most 20, got {theta}")));
    }
    let c = MomentConstants::new(s)?;
    let root = c.sbar.sqrt();
    let g = |m: f64| {
        (c.lambda + c.mu * m * m) * pdf_mul_cdf(m - theta, root * m)
            + c.gamma * m * std_normal_pdf(root * m) * std_normal_pdf(m - theta)
    };
    let radius = spec.trunc_radius;
    let r = integrate_1d(g, theta - radius, theta + radius, spec)?;
    Ok((0.5 * theta * theta).exp() * r.value)
}

/// `E[m_s] = 4√s̄ / (√(2π)·√(1+s̄))`.
pub fn mean(s: f64) -> Result<f64> {
    let sbar = warp(s)?;
    Ok(4.0 * sbar.sqrt() / ((2.0 * PI).sqrt() * (1.0 + sbar).sqrt()))
}

/// `E[m_s²] = (1+3s̄)/(1+s̄)`.
///
/// This equals `λ/2 + 3μ/2`, the value the density integrates to, and gives
/// `E[S(0)²] = 1` at `s = 0`.
pub fn second_moment(s: f64) -> Result<f64> {
    let sbar = warp(s)?;
    Ok((1.0 + 3.0 * sbar) / (1.0 + sbar))
}

/// The uncorrected constant `(2+3s̄)/(1+s̄)`, kept for comparison only: it
/// exceeds the true second moment by `1/(1+s̄)`.
pub fn second_moment_uncorrected(s: f64) -> Result<f64> {
    let sbar = warp(s)?;
    Ok((2.0 + 3.0 * sbar) / (1.0 + sbar))
}

pub fn variance(s: f64) -> Result<f64> {
    let mu = mean(s)?;
    Ok((second_moment(s)? - mu * mu).max(0.0))
}

/// `E[m_s^k]` by quadrature of `m^k p(m)`.
pub fn moment_k(k: u32, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("moment order must be at least 1"));
    }
    require_positive_horizon(s)?;
    let sbar = warp(s)?;
    // Polynomial weight pushes the mass outward; widen the window with k.
    let radius = spec.trunc_radius + (k as f64).sqrt() * 2.0;
    let r = integrate_1d(|m| m.powi(k as i32) * density_at(m, sbar), -radius, radius, spec)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::std_normal_cdf;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn constants_identities() {
        for s in [0.0, 0.2, 0.5, 1.0] {
            let c = MomentConstants::new(s).unwrap();
            assert!((c.lambda * (1.0 + c.sbar) - 2.0).abs() < 1e-15);
            assert!((c.mu * (1.0 + c.sbar) - 2.0 * c.sbar).abs() < 1e-15);
            assert!((c.gamma * (1.0 + c.sbar) - 2.0 * c.sbar.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn mgf_at_zero_is_one() {
        for s in [0.05, 0.3, 0.7, 1.0] {
            assert!((mgf(0.0, s, &spec()).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mgf_matches_definition() {
        let sbar = 1.0;
        let direct = integrate_1d(|m| (0.5 * m).exp() * density_at(m, sbar), -14.0, 14.0, &spec()).unwrap();
        assert!((mgf(0.5, 1.0, &spec()).unwrap() - direct.value).abs() < 1e-8);
    }

    #[test]
    fn mgf_log_convex() {
        let l = |t: f64| mgf(t, 0.5, &spec()).unwrap().ln();
        assert!(l(1.0).is_finite() && l(1.0) > 0.0);
        assert!(2.0 * l(1.0) <= l(0.5) + l(1.5));
        assert!(mgf(25.0, 0.5, &spec()).is_err());
        assert!(mgf(1.0, 0.0, &spec()).is_err());
    }

    #[test]
    fn mgf_curvature_is_second_moment() {
        let tight = QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-13, ..spec() };
        for s in [0.25, 0.5, 1.0] {
            let h = 1e-3;
            let d2 = (mgf(h, s, &tight).unwrap() - 2.0 * mgf(0.0, s, &tight).unwrap() + mgf(-h, s, &tight).unwrap()) / (h * h);
            assert!((d2 - second_moment(s).unwrap()).abs() < 1e-4, "s={s}: {d2}");
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(mean(0.0).unwrap(), 0.0);
        assert!((mean(1.0).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!((mean(1.0).unwrap() - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
        assert_eq!(second_moment(0.0).unwrap(), 1.0);
        assert_eq!(second_moment(1.0).unwrap(), 2.0);
        assert!((second_moment(0.5).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(second_moment_uncorrected(0.0).unwrap(), 2.0);
        assert_eq!(variance(0.0).unwrap(), 1.0);
        assert!((variance(1.0).unwrap() - (2.0 - 4.0 / PI)).abs() < 1e-15);
        assert!(mean(1.5).is_err());
    }

    #[test]
    fn quadrature_agrees_with_closed_forms() {
        for s in [0.1, 0.3, 0.5, 1.0] {
            assert!((moment_k(1, s, &spec()).unwrap() - mean(s).unwrap()).abs() < 1e-9);
            assert!((moment_k(2, s, &spec()).unwrap() - second_moment(s).unwrap()).abs() < 1e-8);
        }
        let m2 = moment_k(2, 0.3, &spec()).unwrap();
        let m1 = moment_k(1, 0.3, &spec()).unwrap();
        assert!((m2 - m1 * m1 - variance(0.3).unwrap()).abs() < 1e-8);
        assert!((moment_k(4, 1e-8, &spec()).unwrap() - 3.0).abs() < 1e-3);
        assert!(moment_k(0, 0.5, &spec()).is_err());
    }

    #[test]
    fn mean_increases_variance_decreases() {
        // Var = (1 + (3 - 8/π)s̄)/(1+s̄) has derivative (2 - 8/π)/(1+s̄)² < 0 in s̄,
        // so the spread shrinks as the window grows even though the level rises.
        let grid: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        for w in grid.windows(2) {
            assert!(mean(w[1]).unwrap() > mean(w[0]).unwrap());
            assert!(variance(w[1]).unwrap() < variance(w[0]).unwrap());
        }
        for s in [0.1, 0.6] {
            let sbar = warp(s).unwrap();
            let closed = (1.0 + (3.0 - 8.0 / PI) * sbar) / (1.0 + sbar);
            assert!((variance(s).unwrap() - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn intermediate_gaussian_integrals() {
        let tight = QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-13, ..spec() };
        for sbar in [0.2f64, 0.5, 1.0] {
            let root = sbar.sqrt();
            let w = |m: f64| std_normal_cdf(root * m) * std_normal_pdf(m);
            let i2 = integrate_1d(|m| m * m * w(m), -14.0, 14.0, &tight).unwrap().value;
            let i4 = integrate_1d(|m| m.powi(4) * w(m), -14.0, 14.0, &tight).unwrap().value;
            let a1 = integrate_1d(|m| m * w(m), -14.0, 14.0, &tight).unwrap().value;
            let a2 = integrate_1d(|m| m.powi(3) * w(m), -14.0, 14.0, &tight).unwrap().value;
            assert!((i2 - 0.5).abs() < 1e-10);
            assert!((i4 - 1.5).abs() < 1e-10);
            let a1_closed = root / ((2.0 * PI).sqrt() * (1.0 + sbar).sqrt());
            assert!((a1 - a1_closed).abs() < 1e-10);
            // third moment term, reading the free symbol in the closed form as s̄
            let a2_closed = (2.0 * sbar.powf(1.5) + 3.0 * root) / ((2.0 * PI).sqrt() * (1.0 + sbar).powf(1.5));
            assert!((a2 - a2_closed).abs() < 1e-10);
        }
    }
}
