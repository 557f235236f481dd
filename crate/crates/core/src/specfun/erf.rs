use std::f64::consts::PI;

use super::{SERIES_EPS, SERIES_MAX_TERMS};
use crate::error::{Error, Result};

// Below this |x| the positive-term series is used, above it the continued
// fraction for erfc.
const SERIES_LIMIT: f64 = 3.0;

/// Error function.
pub fn erf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("erf", x, "finite"));
    }
    Ok(erf_unchecked(x))
}

/// Complementary error function `1 - erf(x)`, accurate in the right tail.
pub fn erfc(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("erfc", x, "finite"));
    }
    Ok(erfc_unchecked(x))
}

fn erf_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax < SERIES_LIMIT {
        erf_series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    value.copysign(x)
}

pub(crate) fn erfc_unchecked(x: f64) -> f64 {
    if x >= SERIES_LIMIT {
        erfc_continued_fraction(x)
    } else if x > -SERIES_LIMIT {
        1.0 - erf_series(x.abs()).copysign(x)
    } else {
        2.0 - erfc_continued_fraction(-x)
    }
}

/// `erf(x) = (2/√π) e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!`, all terms positive.
fn erf_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..SERIES_MAX_TERMS {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// Lentz evaluation of
/// `erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < SERIES_EPS {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}
