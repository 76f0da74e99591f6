//! Adaptive Gauss–Kronrod integration.
//!
//! A globally adaptive bisection scheme on the 7/15-point Gauss–Kronrod pair:
//! the subinterval with the largest error estimate is split until the summed
//! estimate falls below `max(abs_tol, rel_tol·|I|)`. Lower-tail integrals are
//! truncated at a fixed number of standard deviations of the integrand's
//! Gaussian factor, which keeps every evaluation point a pure function of the
//! inputs and the spec.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Hard cap on live subintervals, independent of `max_depth`.
const MAX_SEGMENTS: usize = 20_000;

/// Tolerances and limits shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one subinterval.
    pub max_depth: u32,
    /// Lower-tail truncation, in units of the Gaussian factor's scale.
    pub trunc_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 40,
            trunc_radius: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(Error::domain("max_depth must be at least 1"));
        }
        if !(self.trunc_radius >= 8.0) {
            return Err(Error::domain("trunc_radius must be at least 8"));
        }
        Ok(())
    }

    /// Same spec with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; ties broken by position for a total order
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: x })
        }
    };

    let fc = eval(center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;

    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// Integral of `f` over the finite interval `[lo, hi]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!("integration limits must be finite: [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    if lo > hi {
        return Err(Error::domain(format!("integration limits out of order: [{lo}, {hi}]")));
    }

    adaptive(&f, &[lo, hi], spec)
}

/// Global adaptive integration over consecutive panels `breaks[i]..breaks[i+1]`.
fn adaptive<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult> {
    let mut evaluations = 0;
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        let (value, error) = gk15(f, w[0], w[1])?;
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Segment { lo: w[0], hi: w[1], value, error, depth: 0 });
    }

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let worst = *heap.peek().expect("heap never empties");
        if worst.depth >= spec.max_depth || heap.len() >= MAX_SEGMENTS {
            return Err(Error::NonConvergence {
                error_estimate: total_err,
                tolerance: tol,
                worst_lo: worst.lo,
                worst_hi: worst.hi,
            });
        }
        heap.pop();
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1) = gk15(f, worst.lo, mid)?;
        let (v2, e2) = gk15(f, mid, worst.hi)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        let depth = worst.depth + 1;
        heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1, depth });
        heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2, depth });
    }

    // Left-to-right summation so the result does not depend on heap layout.
    let mut segments = heap.into_vec();
    segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = segments.iter().map(|s| s.value).sum();
    let error_estimate = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, error_estimate, evaluations })
}

/// Integral of `f` over `(-∞, hi]`, for integrands carrying a standard
/// Gaussian factor.
pub fn integrate_lower_tail<F: Fn(f64) -> f64>(f: F, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    integrate_lower_tail_scaled(f, hi, 1.0, spec)
}

/// Integral over `(-∞, hi]` for integrands whose Gaussian factor is centred
/// at zero with standard deviation `scale`. The range is cut at
/// `min(hi, 0) - trunc_radius·scale`; at the default radius of 12 the
/// discarded Gaussian mass is below `Φ(-12) < 2e-33`.
pub fn integrate_lower_tail_scaled<F: Fn(f64) -> f64>(
    f: F,
    hi: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("tail scale must be positive, got {scale}")));
    }
    spec.validate()?;
    if !hi.is_finite() {
        return Err(Error::domain(format!("upper limit must be finite, got {hi}")));
    }
    let lo = hi.min(0.0) - spec.trunc_radius * scale;
    // Seed panels around the Gaussian centre so a peak much narrower than
    // the range is never straddled by the first rule.
    let mut breaks = vec![lo];
    for k in [-4.0, -1.0, 0.0, 1.0, 4.0, spec.trunc_radius] {
        let x = k * scale;
        if x > lo && x < hi {
            breaks.push(x);
        }
    }
    breaks.push(hi);
    adaptive(&f, &breaks, spec)
}

/// Iterated integral `∫_{-∞}^{outer_hi} ∫_{-∞}^{inner_hi(x)} f(x, y) dy dx`.
///
/// The outer variable carries a standard Gaussian factor; the inner variable
/// one of standard deviation `inner_scale`. Inner integrals run at a tenth
/// of the outer tolerances. The reported error is the outer estimate plus
/// the largest inner estimate times the outer range.
pub fn integrate_2d_nested<F, H>(
    f: F,
    outer_hi: f64,
    inner_hi: H,
    inner_scale: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
    H: Fn(f64) -> f64,
{
    let inner_spec = spec.tightened(10.0);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let worst_inner = Cell::new(0.0f64);
    let inner_evals = Cell::new(0usize);

    let outer = |x: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match integrate_lower_tail_scaled(|y| f(x, y), inner_hi(x), inner_scale, &inner_spec) {
            Ok(r) => {
                worst_inner.set(worst_inner.get().max(r.error_estimate));
                inner_evals.set(inner_evals.get() + r.evaluations);
                r.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let result = integrate_lower_tail(outer, outer_hi, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = result?;
    let width = outer_hi - (outer_hi.min(0.0) - spec.trunc_radius);
    Ok(QuadResult {
        value: r.value,
        error_estimate: r.error_estimate + worst_inner.get() * width,
        evaluations: r.evaluations + inner_evals.get(),
    })
}
