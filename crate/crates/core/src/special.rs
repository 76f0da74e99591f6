//! Standard-normal primitives.
//!
//! `Φ` is evaluated through W. J. Cody's rational approximations of `erfc`
//! and its scaled form `erfcx(x) = exp(x²)·erfc(x)`. The Gaussian factor is
//! always applied with a split exponent so that the lower tail keeps full
//! relative precision down to `x ≈ -37`.

use crate::error::{Error, Result};

/// `1/√(2π)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// `ln √(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

// Below this |x| erf is evaluated from its own rational form.
const ERF_SMALL: f64 = 0.46875;
// erfc(x) underflows past this point.
const ERFC_BIG: f64 = 26.543;

const ERF_A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302,
    3_209.377_589_138_469_4,
    0.185_777_706_184_603_15,
];
const ERF_B: [f64; 4] = [
    23.601_290_952_344_122,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_171,
];
const ERFC_C: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_377,
    66.119_190_637_141_63,
    298.635_138_197_400_1,
    881.952_221_241_769,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_6,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const ERFC_D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_3,
    3_290.799_235_733_459_7,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_5,
];
const ERFC_P: [f64; 6] = [
    0.305_326_634_961_232_36,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_26,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const ERFC_Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

#[inline]
fn erf_small(z: f64) -> f64 {
    // erf(x)/x as a rational function of z = x²
    let num = (((ERF_A[4] * z + ERF_A[0]) * z + ERF_A[1]) * z + ERF_A[2]) * z + ERF_A[3];
    let den = (((z + ERF_B[0]) * z + ERF_B[1]) * z + ERF_B[2]) * z + ERF_B[3];
    num / den
}

/// `erfcx(y)` for `y > ERF_SMALL`.
#[inline]
fn erfcx_positive(y: f64) -> f64 {
    if y <= 4.0 {
        let mut num = ERFC_C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + ERFC_C[i]) * y;
            den = (den + ERFC_D[i]) * y;
        }
        (num + ERFC_C[7]) / (den + ERFC_D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut num = ERFC_P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + ERFC_P[i]) * z;
            den = (den + ERFC_Q[i]) * z;
        }
        let r = z * (num + ERFC_P[4]) / (den + ERFC_Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    }
}

/// `exp(-x²/2)` with the square split as `h² + (x-h)(x+h)`, `h` a multiple of
/// 1/16, so the large part of the exponent is exact.
#[inline]
fn exp_neg_half_square(x: f64) -> f64 {
    let h = (x * 16.0).trunc() / 16.0;
    (-0.5 * h * h).exp() * (-0.5 * (x - h) * (x + h)).exp()
}

/// Same split, shifted by an exact offset: `exp(z - x²/2)`.
#[inline]
fn exp_shift_neg_half_square(z: f64, x: f64) -> f64 {
    let h = (x * 16.0).trunc() / 16.0;
    (z - 0.5 * h * h).exp() * (-0.5 * (x - h) * (x + h)).exp()
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let y = x.abs();
    if y <= ERF_SMALL {
        return 1.0 - x * erf_small(y * y);
    }
    let tail = if y >= ERFC_BIG {
        0.0
    } else {
        let h = (y * 16.0).trunc() / 16.0;
        erfcx_positive(y) * (-h * h).exp() * (-(y - h) * (y + h)).exp()
    };
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Overflows to `+∞` for `x` below about `-26.6`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let y = x.abs();
    if y <= ERF_SMALL {
        let z = y * y;
        return z.exp() * (1.0 - x * erf_small(z));
    }
    let r = erfcx_positive(y);
    if x < 0.0 {
        let h = (x * 16.0).trunc() / 16.0;
        let grow = (h * h).exp() * ((x - h) * (x + h)).exp();
        2.0 * grow - r
    } else {
        r
    }
}

/// Standard normal density `φ(x)`.
pub fn std_normal_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    FRAC_1_SQRT_2PI * exp_neg_half_square(x)
}

/// Standard normal distribution function `Φ(x)`, accurate in relative terms
/// throughout the lower tail.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let u = x * std::f64::consts::FRAC_1_SQRT_2;
    if u.abs() <= ERF_SMALL {
        return 0.5 + 0.5 * u * erf_small(u * u);
    }
    let tail = if u.abs() >= ERFC_BIG {
        0.0
    } else {
        0.5 * erfcx_positive(u.abs()) * exp_neg_half_square(x)
    };
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// `exp(z)·Φ(w)` without forming either factor when that would overflow or
/// underflow. Returns `+∞` if the product itself is not representable.
pub(crate) fn exp_mul_cdf_raw(z: f64, w: f64) -> f64 {
    let u = -w * std::f64::consts::FRAC_1_SQRT_2;
    if u > ERF_SMALL {
        // Φ(w) = ½·erfcx(u)·exp(-w²/2)
        0.5 * erfcx_positive(u) * exp_shift_neg_half_square(z, w)
    } else {
        let cdf = std_normal_cdf(w);
        if z > 709.0 {
            // exp(z) alone may overflow while the product does not
            (z + cdf.ln()).exp()
        } else {
            z.exp() * cdf
        }
    }
}

/// `exp(z)·Φ(w)` evaluated stably.
///
/// Every `exp·Φ` product in the crate goes through this routine. Errors with
/// [`Error::Overflow`] when the true product exceeds `f64::MAX`.
pub fn exp_mul_cdf(z: f64, w: f64) -> Result<f64> {
    if !z.is_finite() || w.is_nan() {
        return Err(Error::domain(format!("exp_mul_cdf: non-finite input ({z}, {w})")));
    }
    let v = exp_mul_cdf_raw(z, w);
    if v.is_infinite() {
        return Err(Error::Overflow { z, w });
    }
    Ok(v)
}

/// `φ(x)·Φ(w)`.
#[inline]
pub(crate) fn pdf_mul_cdf(x: f64, w: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let h = (x * 16.0).trunc() / 16.0;
    let z = -0.5 * h * h - LN_SQRT_2PI;
    exp_mul_cdf_raw(z, w) * (-0.5 * (x - h) * (x + h)).exp()
}
