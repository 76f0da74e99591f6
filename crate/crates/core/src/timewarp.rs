//! The time change `s ↦ s/(2-s)`.
//!
//! Conditioned on `S(0) = x`, the Slepian process on `[0,1]` has the law of
//! `(2-u)·B(u/(2-u)) + (1-u)·x`. Every level constraint `S(u) ≤ m` therefore
//! becomes a linear boundary for a standard Brownian motion in warped time.

use crate::bachelier::{LinearBoundary, TwoPieceBoundary};
use crate::error::{Error, Result};

/// An original horizon together with its warped image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpedTime {
    pub s: f64,
    pub sbar: f64,
}

impl WarpedTime {
    pub fn new(s: f64) -> Result<Self> {
        Ok(Self { s, sbar: warp(s)? })
    }
}

/// `s/(2-s)` for `s ∈ [0,1]`.
pub fn warp(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("horizon {s} outside [0, 1]")));
    }
    Ok(s / (2.0 - s))
}

/// Inverse of [`warp`]: `2x/(1+x)`.
pub fn unwarp(sbar: f64) -> f64 {
    2.0 * sbar / (1.0 + sbar)
}

/// Constants of the nested-maxima formula for levels `m ≤ M` and horizons
/// `0 < s ≤ t ≤ 1`.
///
/// For a starting value `x = S(0)` the first-window boundary reaches
/// `q - p·x` at the breakpoint `sbar`, and the second-window boundary
/// reaches `eta - p·x` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointParams {
    pub m: f64,
    pub big_m: f64,
    pub p: f64,
    pub q: f64,
    pub eta: f64,
    pub delta: f64,
    pub sbar: f64,
    pub horizon: f64,
}

impl JointParams {
    pub fn new(m: f64, big_m: f64, s: f64, t: f64) -> Result<Self> {
        if !(s > 0.0 && s <= t && t <= 1.0) {
            return Err(Error::domain(format!("need 0 < s ≤ t ≤ 1, got s={s}, t={t}")));
        }
        if m > big_m {
            return Err(Error::domain(format!("need m ≤ M, got m={m}, M={big_m}")));
        }
        let sbar = warp(s)?;
        let horizon = warp(t)?;
        Ok(Self {
            m,
            big_m,
            p: (1.0 - sbar) / 2.0,
            q: (sbar + 1.0) / 2.0 * m,
            eta: (sbar + 1.0) / 2.0 * big_m,
            // s ≤ t guarantees T ≥ s̄, but rounding may not
            delta: (horizon - sbar).max(0.0).sqrt(),
            sbar,
            horizon,
        })
    }

    /// Upper limit of the inner integral: value of the first-window boundary
    /// at the breakpoint.
    #[inline]
    pub fn first_endpoint(&self, x: f64) -> f64 {
        self.q - self.p * x
    }

    /// Value of the second-window boundary at the breakpoint.
    #[inline]
    pub fn second_endpoint(&self, x: f64) -> f64 {
        self.eta - self.p * x
    }

    /// Brownian boundary seen by the conditioned process started at `x`:
    /// slope `(m+x)/2`, intercept `(m-x)/2` up to `sbar`, then slope
    /// `(M+x)/2`, intercept `(M-x)/2` up to the horizon.
    pub fn boundary(&self, x: f64) -> TwoPieceBoundary {
        TwoPieceBoundary {
            first: LinearBoundary::new((self.m - x) / 2.0, (self.m + x) / 2.0),
            second: LinearBoundary::new((self.big_m - x) / 2.0, (self.big_m + x) / 2.0),
            breakpoint: self.sbar,
            horizon: self.horizon,
        }
    }
}
