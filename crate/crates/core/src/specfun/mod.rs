//! Special functions used by the closed-form analysis.
//!
//! Every routine is real-argument, double precision, and switches between a
//! convergent series near the origin and an asymptotic or continued-fraction
//! form further out. Series are summed until the relative size of the next
//! term drops below [`SERIES_EPS`] or [`SERIES_MAX_TERMS`] terms have been
//! used.

mod bessel;
mod erf;
mod expint;
mod gamma;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, laguerre_half};
pub(crate) use bessel::ln_bessel_k_sequence;
pub use erf::{erf, erfc};
pub(crate) use erf::erfc_unchecked;
pub use expint::ein_series;
pub use gamma::ln_gamma;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub const SERIES_EPS: f64 = 1e-16;
pub const SERIES_MAX_TERMS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathConstants {
    pub euler_gamma: f64,
    pub pi: f64,
}

pub const CONSTANTS: MathConstants = MathConstants {
    euler_gamma: EULER_GAMMA,
    pi: std::f64::consts::PI,
};

/// Combined relative/absolute acceptance band.
///
/// A value passes when `|actual - expected| <= absolute + relative * |expected|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    relative: f64,
    absolute: f64,
}

impl Tolerance {
    pub fn new(relative: f64, absolute: f64) -> Result<Self> {
        let finite = relative.is_finite() && absolute.is_finite();
        if !finite || relative < 0.0 || absolute < 0.0 || (relative == 0.0 && absolute == 0.0) {
            return Err(Error::invalid(
                "tolerance",
                format!("relative={relative}, absolute={absolute}"),
            ));
        }
        Ok(Self { relative, absolute })
    }

    pub fn relative(relative: f64) -> Result<Self> {
        Self::new(relative, 0.0)
    }

    pub fn absolute(absolute: f64) -> Result<Self> {
        Self::new(0.0, absolute)
    }

    pub fn relative_part(&self) -> f64 {
        self.relative
    }

    pub fn absolute_part(&self) -> f64 {
        self.absolute
    }

    pub fn accepts(&self, actual: f64, expected: f64) -> bool {
        (actual - expected).abs() <= self.absolute + self.relative * expected.abs()
    }
}
