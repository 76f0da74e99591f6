//! Non-crossing probabilities of standard Brownian motion below linear
//! boundaries.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_lower_tail_scaled, QuadratureSpec};
use crate::special::{exp_mul_cdf_raw, std_normal_cdf, FRAC_1_SQRT_2PI};

/// The boundary `u ↦ intercept + slope·u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBoundary {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearBoundary {
    pub fn new(intercept: f64, slope: f64) -> Self {
        Self { intercept, slope }
    }

    #[inline]
    pub fn at(&self, u: f64) -> f64 {
        self.intercept + self.slope * u
    }
}

/// `first` on `[0, breakpoint]`, `second` on `[breakpoint, horizon]`. The two
/// pieces need not meet at the breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPieceBoundary {
    pub first: LinearBoundary,
    pub second: LinearBoundary,
    pub breakpoint: f64,
    pub horizon: f64,
}

impl TwoPieceBoundary {
    pub fn validate(&self) -> Result<()> {
        if !(self.breakpoint > 0.0 && self.breakpoint <= self.horizon && self.horizon.is_finite()) {
            return Err(Error::domain(format!(
                "two-piece boundary needs 0 < breakpoint ≤ horizon, got {} and {}",
                self.breakpoint, self.horizon
            )));
        }
        let (lo, hi) = (self.first.at(self.breakpoint), self.second.at(self.breakpoint));
        if lo > hi {
            return Err(Error::domain(format!(
                "first piece ends above second piece at the breakpoint ({lo} > {hi})"
            )));
        }
        Ok(())
    }
}

/// Bachelier–Lévy kernel without argument checks. `horizon` must be positive.
#[inline]
pub(crate) fn bl_kernel(intercept: f64, slope: f64, horizon: f64) -> f64 {
    if intercept <= 0.0 {
        return 0.0;
    }
    let root = horizon.sqrt();
    let upper = std_normal_cdf(slope * root + intercept / root);
    let lower = exp_mul_cdf_raw(-2.0 * intercept * slope, slope * root - intercept / root);
    // cancellation near intercept → 0⁺ can leave a tiny negative remainder
    (upper - lower).clamp(0.0, 1.0)
}

/// `P{B(u) ≤ a + b·u for all u ∈ [0, T]}`, zero when `a ≤ 0`.
pub fn bl_finite(a: f64, b: f64, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
    }
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("boundary coefficients must not be NaN"));
    }
    if horizon.is_infinite() {
        return if b > 0.0 { bl_infinite(a, b) } else { Ok(0.0) };
    }
    Ok(bl_kernel(a, b, horizon))
}

/// `P{B(u) ≤ a + b·u for all u ≥ 0} = 1 - exp(-2ab)` for `b > 0`.
pub fn bl_infinite(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::domain(format!("infinite-horizon slope must be positive, got {b}")));
    }
    if !(a > 0.0) {
        return Ok(0.0);
    }
    Ok((-(-2.0 * a * b).exp_m1()).clamp(0.0, 1.0))
}

#[inline]
pub(crate) fn bridge_kernel(a: f64, b: f64, sbar: f64, y: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    let gap = (b + a * sbar - y).max(0.0);
    (-(-2.0 * b * gap / sbar).exp_m1()).clamp(0.0, 1.0)
}

/// `P{B(u) ≤ a·u + b on [0, s̄] | B(s̄) = y}` for an endpoint at or below the
/// boundary.
pub fn bridge_noncross(a: f64, b: f64, sbar: f64, y: f64) -> Result<f64> {
    if !(sbar > 0.0) {
        return Err(Error::domain(format!("bridge length must be positive, got {sbar}")));
    }
    if y > a * sbar + b {
        return Err(Error::domain(format!(
            "bridge endpoint {y} lies above the boundary value {}",
            a * sbar + b
        )));
    }
    Ok(bridge_kernel(a, b, sbar, y))
}

#[inline]
pub(crate) fn segment_kernel(c: f64, d: f64, sbar: f64, horizon: f64, y: f64) -> f64 {
    bl_kernel(d + c * sbar - y, c, horizon - sbar)
}

/// `P{B(u) ≤ c·u + d on [s̄, T] | B(s̄) = y}`. Restarting the motion at `s̄`
/// turns this into [`bl_finite`] with intercept `d + c·s̄ - y` over `T - s̄`.
pub fn segment_noncross(c: f64, d: f64, sbar: f64, horizon: f64, y: f64) -> Result<f64> {
    if !(sbar >= 0.0 && horizon > sbar) {
        return Err(Error::domain(format!("need T > s̄ ≥ 0, got s̄={sbar}, T={horizon}")));
    }
    Ok(segment_kernel(c, d, sbar, horizon, y))
}

/// Non-crossing probability of a two-piece linear boundary, by conditioning
/// on `B(breakpoint)`:
///
/// `∫_{-∞}^{a s̄ + b} bridge(y)·segment(y)·φ_{s̄}(y) dy`.
pub fn twopiece_noncross(boundary: &TwoPieceBoundary, spec: &QuadratureSpec) -> Result<f64> {
    boundary.validate()?;
    let TwoPieceBoundary { first, second, breakpoint: sbar, horizon } = *boundary;
    if first.intercept <= 0.0 {
        return Ok(0.0);
    }
    if horizon - sbar <= f64::EPSILON * horizon {
        return bl_finite(first.intercept, first.slope, sbar);
    }
    let sd = sbar.sqrt();
    let norm = FRAC_1_SQRT_2PI / sd;
    let integrand = |y: f64| {
        let z = y / sd;
        norm * (-0.5 * z * z).exp()
            * bridge_kernel(first.slope, first.intercept, sbar, y)
            * segment_kernel(second.slope, second.intercept, sbar, horizon, y)
    };
    let r = integrate_lower_tail_scaled(integrand, first.at(sbar), sd, spec)?;
    Ok(r.value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bl_finite_examples() {
        assert_eq!(bl_finite(-0.5, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(bl_finite(0.0, 1.0, 1.0).unwrap(), 0.0);
        let v = bl_finite(1.0, 0.0, 1.0).unwrap();
        assert!((v - (2.0 * std_normal_cdf(1.0) - 1.0)).abs() < 1e-15);
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-10);
        let far = bl_finite(1.0, 1.0, 1e6).unwrap();
        assert!((far - (1.0 - (-2.0f64).exp())).abs() < 1e-6);
        assert!(bl_finite(1.0, 1.0, 0.0).is_err());
        assert_eq!(bl_finite(1.0, 1.0, f64::INFINITY).unwrap(), bl_infinite(1.0, 1.0).unwrap());
    }

    #[test]
    fn bl_infinite_examples() {
        assert!((bl_infinite(1.0, 1.0).unwrap() - 0.864_664_716_763_387_3).abs() < 1e-15);
        assert_eq!(bl_infinite(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(bl_infinite(400.0, 1.0).unwrap(), 1.0);
        assert!(bl_infinite(1.0, 0.0).is_err());
    }

    #[test]
    fn bl_finite_approaches_infinite_horizon() {
        let limit = bl_infinite(1.0, 1.0).unwrap();
        let mut prev = 1.0;
        for horizon in [10.0, 1e2, 1e4, 1e6] {
            let v = bl_finite(1.0, 1.0, horizon).unwrap();
            assert!(v >= limit - 1e-15 && v <= prev + 1e-15);
            prev = v;
        }
        assert!((prev - limit).abs() < 1e-6);
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(bridge_noncross(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        let e2 = 1.0 - (-2.0f64).exp();
        assert!((bridge_noncross(0.0, 1.0, 1.0, 0.0).unwrap() - e2).abs() < 1e-15);
        assert!((bridge_noncross(1.0, 0.5, 0.5, 0.0).unwrap() - e2).abs() < 1e-15);
        assert_eq!(bridge_noncross(1.0, -0.2, 0.5, -1.0).unwrap(), 0.0);
        assert!(bridge_noncross(0.0, 1.0, 1.0, 1.5).is_err());
        assert!(bridge_noncross(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn segment_examples() {
        let v = segment_noncross(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!((v - bl_finite(1.0, 0.0, 1.0).unwrap()).abs() < 1e-15);
        assert_eq!(segment_noncross(2.0, 1.0, 0.5, 1.0, 2.0).unwrap(), 0.0);
        let v = segment_noncross(1.0, 1.0, 1.0, 2.0, 0.0).unwrap();
        assert!((v - bl_finite(2.0, 1.0, 1.0).unwrap()).abs() <= 1e-14);
        assert!(segment_noncross(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn twopiece_continuous_reduces_to_single_line() {
        let spec = QuadratureSpec::default();
        for &(a, b, sbar, horizon) in &[(0.0, 1.0, 0.5, 1.0), (0.7, 0.4, 0.2, 0.9), (-0.3, 1.5, 0.6, 2.0)] {
            let line = LinearBoundary::new(b, a);
            let bd = TwoPieceBoundary { first: line, second: line, breakpoint: sbar, horizon };
            let v = twopiece_noncross(&bd, &spec).unwrap();
            let want = bl_finite(b, a, horizon).unwrap();
            assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        }
    }

    #[test]
    fn twopiece_edge_cases() {
        let spec = QuadratureSpec::default();
        let bd = TwoPieceBoundary {
            first: LinearBoundary::new(-0.1, 1.0),
            second: LinearBoundary::new(2.0, 0.0),
            breakpoint: 0.5,
            horizon: 1.0,
        };
        assert_eq!(twopiece_noncross(&bd, &spec).unwrap(), 0.0);
        let inverted = TwoPieceBoundary {
            first: LinearBoundary::new(2.0, 0.0),
            second: LinearBoundary::new(1.0, 0.0),
            ..bd
        };
        assert!(twopiece_noncross(&inverted, &spec).is_err());
        let flat = TwoPieceBoundary { first: LinearBoundary::new(1.0, 0.0), horizon: 0.5, ..bd };
        let v = twopiece_noncross(&flat, &spec).unwrap();
        assert_eq!(v, bl_finite(1.0, 0.0, 0.5).unwrap());
    }

    #[test]
    fn twopiece_between_continuous_envelopes() {
        // Jump from 1 up to 2 at s̄ = 0.5.
        let spec = QuadratureSpec::default();
        let bd = TwoPieceBoundary {
            first: LinearBoundary::new(1.0, 0.0),
            second: LinearBoundary::new(2.0, 0.0),
            breakpoint: 0.5,
            horizon: 1.0,
        };
        let v = twopiece_noncross(&bd, &spec).unwrap();
        let below = bl_finite(1.0, 0.0, 1.0).unwrap();
        let above = bl_finite(2.0, 0.0, 1.0).unwrap();
        assert!(below <= v && v <= above, "{below} ≤ {v} ≤ {above}");
    }

    proptest! {
        #[test]
        fn bl_finite_monotone(a in 0.01f64..4.0, b in -3.0f64..3.0, horizon in 0.05f64..5.0, da in 0.0f64..1.0, db in 0.0f64..1.0, dt in 0.0f64..2.0) {
            let base = bl_finite(a, b, horizon).unwrap();
            prop_assert!((0.0..=1.0).contains(&base));
            prop_assert!(bl_finite(a + da, b, horizon).unwrap() >= base - 1e-14);
            prop_assert!(bl_finite(a, b + db, horizon).unwrap() >= base - 1e-14);
            prop_assert!(bl_finite(a, b, horizon + dt).unwrap() <= base + 1e-14);
        }

        #[test]
        fn bridge_properties(a in -2.0f64..2.0, b in 0.0f64..3.0, sbar in 0.05f64..1.0, below in 0.0f64..4.0, db in 0.0f64..1.0) {
            let top = a * sbar + b;
            let y = top - below;
            let v = bridge_noncross(a, b, sbar, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert_eq!(bridge_noncross(a, b, sbar, top).unwrap(), 0.0);
            prop_assert!(bridge_noncross(a, b + db, sbar, y).unwrap() >= v - 1e-15);
        }

        #[test]
        fn shift_identity(c in -2.0f64..2.0, d in -1.0f64..3.0, sbar in 0.0f64..1.0, len in 0.01f64..2.0, y in -3.0f64..2.0) {
            let horizon = sbar + len;
            let lhs = segment_noncross(c, d, sbar, horizon, y).unwrap();
            let rhs = bl_finite(d + c * sbar - y, c, horizon - sbar).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14);
        }
    }
}
