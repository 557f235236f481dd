use std::f64::consts::PI;

use crate::error::{Error, Result};

// Stirling series is used from here up; smaller arguments are shifted.
const STIRLING_MIN: f64 = 15.0;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain("ln_gamma", x, "finite x > 0"));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut shifted = x;
    let mut log_product = 0.0;
    while shifted < STIRLING_MIN {
        log_product += shifted.ln();
        shifted += 1.0;
    }
    Ok(stirling(shifted) - log_product)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut correction = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        correction += c * power;
        power *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + correction
}
