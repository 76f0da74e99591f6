//! Distribution of the running maximum `m_s = max_{0≤u≤s} S(u)` and the
//! joint law of the nested maxima `(m_s, M_t)`, `s ≤ t`.
//!
//! All formulas condition on `S(0) = x ~ N(0,1)`. Given `x`, staying below a
//! level on `[0, s]` is a linear-boundary problem for a Brownian motion over
//! the warped horizon `s̄ = s/(2-s)`; see [`crate::timewarp`].

use std::f64::consts::PI;

use crate::bachelier::{bl_kernel, twopiece_noncross};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d_nested, integrate_lower_tail, QuadratureSpec};
use crate::special::{pdf_mul_cdf, std_normal_cdf, std_normal_pdf, FRAC_1_SQRT_2PI};
use crate::timewarp::{warp, JointParams};

/// Below this gap `t - s` the second window is treated as empty.
pub const DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalQuery {
    pub m: f64,
    pub s: f64,
}

impl MarginalQuery {
    pub fn new(m: f64, s: f64) -> Result<Self> {
        let q = Self { m, s };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_nan() {
            return Err(Error::domain("level m is NaN"));
        }
        warp(self.s).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointQuery {
    pub m: f64,
    pub big_m: f64,
    pub s: f64,
    pub t: f64,
}

impl JointQuery {
    pub fn new(m: f64, big_m: f64, s: f64, t: f64) -> Result<Self> {
        let q = Self { m, big_m, s, t };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_nan() || self.big_m.is_nan() {
            return Err(Error::domain("levels must not be NaN"));
        }
        warp(self.s)?;
        warp(self.t)?;
        if self.s > self.t {
            return Err(Error::domain(format!("need s ≤ t, got s={}, t={}", self.s, self.t)));
        }
        Ok(())
    }
}

/// `P(m_s ≤ m)`.
///
/// Evaluated as `∫_{-∞}^{m} φ(x)·BL((m-x)/2, (m+x)/2, s̄) dx`, where `BL` is
/// the finite-horizon Bachelier–Lévy probability. For `s = 0` this is `Φ(m)`.
pub fn running_max_cdf(q: MarginalQuery, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    let MarginalQuery { m, s } = q;
    if m == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if m == f64::INFINITY {
        return Ok(1.0);
    }
    if s == 0.0 {
        return Ok(std_normal_cdf(m));
    }
    start_below_level(m, m, warp(s)?, spec)
}

/// `P(S(0) ≤ upper, S(u) ≤ level on [0, u(horizon)])` for a warped horizon.
fn start_below_level(upper: f64, level: f64, horizon: f64, spec: &QuadratureSpec) -> Result<f64> {
    let integrand = |x: f64| {
        std_normal_pdf(x) * bl_kernel((level - x) / 2.0, (level + x) / 2.0, horizon)
    };
    let r = integrate_lower_tail(integrand, upper, spec)?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// `P(max_{[0,1]} S ≤ M) = Φ(M)² - M·φ(M)·Φ(M) - φ(M)²`.
pub fn global_max_cdf(big_m: f64) -> f64 {
    if big_m == f64::INFINITY {
        return 1.0;
    }
    if big_m == f64::NEG_INFINITY {
        return 0.0;
    }
    let cdf = std_normal_cdf(big_m);
    let pdf = std_normal_pdf(big_m);
    (cdf * cdf - big_m * pdf * cdf - pdf * pdf).clamp(0.0, 1.0)
}

/// `P(m_s ≤ 0)` in closed form.
///
/// The angle is taken as `atan2(2√s̄, s̄ - 1) ∈ (0, π]`; the one-argument
/// arctangent would go negative for `s̄ < 1`.
pub fn prob_nonpositive(s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("horizon {s} outside (0, 1]")));
    }
    let sbar = warp(s)?;
    let root = sbar.sqrt();
    let angle = (2.0 * root).atan2(sbar - 1.0);
    Ok(angle / (2.0 * PI) - root / ((sbar + 1.0) * PI))
}

/// Density of `m_s`:
///
/// `p(m) = λ Φ(√s̄ m) φ(m) + μ m² Φ(√s̄ m) φ(m) + γ m φ(√s̄ m) φ(m)`
/// with `λ = 2/(1+s̄)`, `μ = 2s̄/(1+s̄)`, `γ = 2√s̄/(1+s̄)`.
pub fn running_max_pdf(q: MarginalQuery) -> Result<f64> {
    q.validate()?;
    if q.s == 0.0 {
        return Err(Error::domain("m_0 = S(0) is standard normal; use std_normal_pdf"));
    }
    let sbar = warp(q.s)?;
    Ok(density_at(q.m, sbar))
}

#[inline]
pub(crate) fn density_at(m: f64, sbar: f64) -> f64 {
    if m.is_infinite() {
        return 0.0;
    }
    let root = sbar.sqrt();
    let lambda = 2.0 / (1.0 + sbar);
    let mu = 2.0 * sbar / (1.0 + sbar);
    let gamma = 2.0 * root / (1.0 + sbar);
    let both = pdf_mul_cdf(m, root * m);
    let v = (lambda + mu * m * m) * both + gamma * m * std_normal_pdf(root * m) * std_normal_pdf(m);
    v.max(0.0)
}

/// `P(m_s ≤ m, M_t ≤ M)` for `0 ≤ s ≤ t ≤ 1`.
///
/// Levels are clamped to `m' = min(m, M)`, since `m_s ≤ M_t` makes the first
/// constraint redundant when `m > M`. Cases:
/// * `s = 0`: single integral over `x = S(0) ≤ m'` against the level `M` on
///   the warped horizon `T = t/(2-t)`;
/// * `t - s ≤ DEGENERACY_GAP`: `P(m_t ≤ m')`;
/// * otherwise the double integral over `x ≤ m'` and the Brownian value
///   `y ≤ q - p x` at the breakpoint `s̄`.
pub fn joint_cdf(q: JointQuery, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    let JointQuery { m, big_m, s, t } = q;
    let lo = m.min(big_m);
    if lo == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if big_m == f64::INFINITY {
        return running_max_cdf(MarginalQuery { m, s }, spec);
    }
    if s == 0.0 {
        if t == 0.0 {
            return Ok(std_normal_cdf(lo));
        }
        return start_below_level(lo, big_m, warp(t)?, spec);
    }
    if t - s <= DEGENERACY_GAP {
        return running_max_cdf(MarginalQuery { m: lo, s: t }, spec);
    }

    let params = JointParams::new(lo, big_m, s, t)?;
    let value = nested_maxima_integral(&params, spec)?;
    Ok(value.clamp(0.0, 1.0))
}

fn nested_maxima_integral(params: &JointParams, spec: &QuadratureSpec) -> Result<f64> {
    let JointParams { m, big_m, sbar, delta, .. } = *params;
    let sd = sbar.sqrt();
    let norm = FRAC_1_SQRT_2PI / sd;
    let integrand = |x: f64, y: f64| {
        let z = y / sd;
        let gaussians = std_normal_pdf(x) * norm * (-0.5 * z * z).exp();
        // 1 - exp(-(m-x)(q - p x - y)/s̄)
        let first = -(-(m - x) * (params.first_endpoint(x) - y).max(0.0) / sbar).exp_m1();
        // Φ(r/δ + (M+x)δ/2) - exp(-(M+x) r)·Φ(r/δ - (M+x)δ/2), r = η - p x - y
        let second = bl_kernel(params.second_endpoint(x) - y, (big_m + x) / 2.0, delta * delta);
        gaussians * first * second
    };
    let r = integrate_2d_nested(integrand, m, |x| params.first_endpoint(x), sd, spec)?;
    Ok(r.value)
}

/// The same joint probability computed a second way:
/// an outer integral over `S(0) = x` of the two-piece Brownian non-crossing
/// probability. Used as an independent check of [`joint_cdf`].
pub fn joint_cdf_by_conditioning(q: JointQuery, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    let JointQuery { m, big_m, s, t } = q;
    if !(s > 0.0 && t - s > DEGENERACY_GAP && m.is_finite() && big_m.is_finite()) {
        return joint_cdf(q, spec);
    }
    let params = JointParams::new(m.min(big_m), big_m, s, t)?;
    let inner_spec = spec.tightened(10.0);
    let failure = std::cell::RefCell::new(None);
    let integrand = |x: f64| match twopiece_noncross(&params.boundary(x), &inner_spec) {
        Ok(v) => std_normal_pdf(x) * v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let r = integrate_lower_tail(integrand, params.m, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn cdf(m: f64, s: f64) -> f64 {
        running_max_cdf(MarginalQuery::new(m, s).unwrap(), &spec()).unwrap()
    }

    fn joint(m: f64, big_m: f64, s: f64, t: f64) -> f64 {
        joint_cdf(JointQuery::new(m, big_m, s, t).unwrap(), &spec()).unwrap()
    }

    #[test]
    fn cdf_at_time_zero_is_normal() {
        assert_eq!(cdf(1.5, 0.0), std_normal_cdf(1.5));
    }

    #[test]
    fn cdf_global_anchor() {
        let want = 0.25 - 1.0 / (2.0 * PI);
        assert!((global_max_cdf(0.0) - want).abs() < 1e-15);
        assert!((cdf(0.0, 1.0) - want).abs() < 1e-8);
        assert!((global_max_cdf(12.0) - 1.0).abs() < 1e-12);
        assert!((global_max_cdf(1.0) - cdf(1.0, 1.0)).abs() < 1e-8);
    }

    #[test]
    fn cdf_infinite_levels_and_domain() {
        assert_eq!(cdf(f64::INFINITY, 0.4), 1.0);
        assert_eq!(cdf(f64::NEG_INFINITY, 0.4), 0.0);
        assert!(MarginalQuery::new(0.0, 1.2).is_err());
        assert!(MarginalQuery::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn prob_nonpositive_examples() {
        let at_one = prob_nonpositive(1.0).unwrap();
        assert!((at_one - (0.25 - 1.0 / (2.0 * PI))).abs() < 1e-15);
        assert!((prob_nonpositive(1e-6).unwrap() - 0.5).abs() < 1e-3);
        assert!((prob_nonpositive(0.5).unwrap() - cdf(0.0, 0.5)).abs() < 1e-8);
        assert!(prob_nonpositive(0.0).is_err());
        assert!(prob_nonpositive(1.1).is_err());
    }

    #[test]
    fn pdf_examples() {
        let v = running_max_pdf(MarginalQuery::new(0.0, 1.0).unwrap()).unwrap();
        assert!((v - std_normal_pdf(0.0) / 2.0).abs() < 1e-16);
        for m in [-2.0, -0.5, 0.0, 1.0, 2.5] {
            let v = running_max_pdf(MarginalQuery::new(m, 1e-8).unwrap()).unwrap();
            assert!((v - std_normal_pdf(m)).abs() < 1e-4, "m={m}: {v}");
        }
        assert!(running_max_pdf(MarginalQuery::new(0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn pdf_normalised() {
        let sbar = warp(0.3).unwrap();
        let r = crate::quadrature::integrate_1d(|m| density_at(m, sbar), -12.0, 12.0, &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn joint_reductions() {
        for &(c, s, t) in &[(1.0, 0.3, 0.8), (0.5, 0.5, 1.0), (-0.4, 0.2, 0.4)] {
            assert!((joint(c, c, s, t) - cdf(c, t)).abs() < 1e-7);
        }
        assert!((joint(1.0, 12.0, 0.3, 0.8) - cdf(1.0, 0.3)).abs() < 1e-7);
        assert_eq!(joint(1.0, f64::INFINITY, 0.3, 0.8), cdf(1.0, 0.3));
        assert_eq!(joint(f64::NEG_INFINITY, 1.0, 0.3, 0.8), 0.0);
        // m > M collapses onto the larger window
        assert_eq!(joint(2.0, 1.0, 0.3, 0.8), joint(1.0, 1.0, 0.3, 0.8));
    }

    #[test]
    fn joint_degenerate_window() {
        assert_eq!(joint(1.0, 1.0, 0.5, 0.5), cdf(1.0, 0.5));
        assert_eq!(joint(0.2, 0.9, 0.5, 0.5), cdf(0.2, 0.5));
        assert_eq!(joint(0.3, 0.7, 0.0, 0.0), std_normal_cdf(0.3));
    }

    #[test]
    fn joint_domain_errors() {
        assert!(JointQuery::new(0.0, 1.0, 0.9, 0.3).is_err());
        assert!(JointQuery::new(0.0, 1.0, -0.1, 0.3).is_err());
        assert!(JointQuery::new(0.0, 1.0, 0.1, 1.3).is_err());
    }

    #[test]
    fn joint_two_routes_agree() {
        for &(m, big_m, s, t) in &[(0.5, 1.0, 0.3, 0.8), (-0.3, 0.4, 0.5, 1.0), (1.0, 1.5, 0.2, 0.4)] {
            let q = JointQuery::new(m, big_m, s, t).unwrap();
            let direct = joint_cdf(q, &spec()).unwrap();
            let composed = joint_cdf_by_conditioning(q, &spec()).unwrap();
            assert!((direct - composed).abs() < 1e-8, "{q:?}: {direct} vs {composed}");
        }
    }

    #[test]
    fn joint_seam_at_zero() {
        for &(m, big_m, t) in &[(0.5, 1.0, 0.8), (0.0, 0.5, 0.4)] {
            let at_zero = joint(m, big_m, 0.0, t);
            let near = joint(m, big_m, 1e-8, t);
            assert!((at_zero - near).abs() < 5e-5, "{at_zero} vs {near}");
            // the gap closes like √s
            let gap = |s: f64| (joint(m, big_m, s, t) - at_zero).abs();
            assert!(gap(1e-6) < 0.2 * gap(1e-4), "{} {}", gap(1e-6), gap(1e-4));
        }
    }
}
