//! Modified Bessel functions of integer order and the half-order Laguerre
//! function built on them.

use std::f64::consts::PI;

use super::{EULER_GAMMA, SERIES_EPS, SERIES_MAX_TERMS};
use crate::error::{Error, Result};

// I_ν: power series up to here, Hankel asymptotic expansion beyond.
const I_SERIES_LIMIT: f64 = 25.0;
// K_0/K_1: log-series up to here, Steed's continued fraction beyond.
const K_SERIES_LIMIT: f64 = 2.0;

/// Modified Bessel function of the first kind, orders 0 and 1.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(order, x)? * x.exp())
}

/// `e^{-x} I_ν(x)`, orders 0 and 1.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::domain("bessel_i", order as f64, "order 0 or 1"));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(Error::domain("bessel_i", x, "finite x >= 0"));
    }
    Ok(i_scaled(order, x))
}

fn i_scaled(order: u32, x: f64) -> f64 {
    if x <= I_SERIES_LIMIT {
        i_series(order, x) * (-x).exp()
    } else {
        i_asymptotic_scaled(order, x)
    }
}

/// `Σ (x/2)^{2k+ν} / (k! (k+ν)!)`
fn i_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let nu = order as f64;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term <= SERIES_EPS * sum {
            break;
        }
    }
    sum
}

/// `e^{-x} I_ν(x) ≈ (2πx)^{-1/2} Σ (-1)^k a_k(ν) / x^k`, stopped at the
/// smallest term.
fn i_asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= SERIES_EPS * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Modified Bessel function of the second kind for integer order.
///
/// Negative orders are folded with `K_{-ν} = K_ν`. Underflows to zero for
/// `x` beyond roughly 700; use [`bessel_k_scaled`] there.
pub fn bessel_k(order: i32, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(order, x)? * (-x).exp())
}

/// `e^{x} K_ν(x)` for integer order.
pub fn bessel_k_scaled(order: i32, x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain("bessel_k", x, "finite x > 0"));
    }
    let order = order.unsigned_abs();
    let (k0, k1) = k01_scaled(x);
    if order == 0 {
        return Ok(k0);
    }
    // upward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m is stable
    let (mut prev, mut cur) = (k0, k1);
    for m in 1..order {
        let next = prev + 2.0 * m as f64 / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `ln K_m(x)` for `m = 0..=max_order`, built from the ratios
/// `K_{m+1}/K_m = K_{m-1}/K_m + 2m/x` so that neither overflow at small `x`
/// nor underflow at large `x` can occur.
pub(crate) fn ln_bessel_k_sequence(max_order: usize, x: f64) -> Vec<f64> {
    debug_assert!(x > 0.0);
    let (k0, k1) = k01_scaled(x);
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(k0.ln() - x);
    if max_order == 0 {
        return out;
    }
    let mut ratio = k1 / k0;
    out.push(out[0] + ratio.ln());
    for m in 1..max_order {
        ratio = 1.0 / ratio + 2.0 * m as f64 / x;
        out.push(out[m] + ratio.ln());
    }
    out
}

/// `(e^x K_0(x), e^x K_1(x))`.
fn k01_scaled(x: f64) -> (f64, f64) {
    if x <= K_SERIES_LIMIT {
        let (k0, k1) = k01_series(x);
        let s = x.exp();
        (k0 * s, k1 * s)
    } else {
        k01_steed_scaled(x)
    }
}

/// Small-argument series
/// `K_0 = -(ln(x/2) + γ) I_0 + Σ_{k≥1} H_k (x²/4)^k/(k!)²`,
/// `K_1 = 1/x + ln(x/2) I_1 - (x/4) Σ_{k≥0} (ψ(k+1)+ψ(k+2)) (x²/4)^k/(k!(k+1)!)`.
fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K_0
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut tail0 = 0.0;
    // K_1: ψ(1) = -γ, ψ(2) = 1 - γ
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = 1.0 - EULER_GAMMA;
    let mut term1 = 1.0;
    let mut tail1 = psi_a + psi_b;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        tail0 += harmonic * term;

        term1 *= q / (kf * (kf + 1.0));
        psi_a += 1.0 / kf;
        psi_b += 1.0 / (kf + 1.0);
        let inc1 = (psi_a + psi_b) * term1;
        tail1 += inc1;

        if harmonic * term <= SERIES_EPS * tail0.abs() && inc1.abs() <= SERIES_EPS * tail1.abs() {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i_series(0, x) + tail0;
    let k1 = 1.0 / x + log_half * i_series(1, x) - 0.25 * x * tail1;
    (k0, k1)
}

/// Steed's continued-fraction method (Temme's CF2) for `x > 2`, order 0.
fn k01_steed_scaled(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..SERIES_MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < SERIES_EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Laguerre function `L_{1/2}(x)` on the branch `x ≤ 0`.
///
/// Uses `L_{1/2}(x) = e^{x/2} [(1-x) I_0(-x/2) - x I_1(-x/2)]`, evaluated
/// with exponentially scaled Bessel functions so large `|x|` does not
/// overflow.
pub fn laguerre_half(x: f64) -> Result<f64> {
    if x > 0.0 || !x.is_finite() {
        return Err(Error::domain("laguerre_half", x, "finite x <= 0"));
    }
    let y = -0.5 * x;
    Ok((1.0 - x) * i_scaled(0, y) - x * i_scaled(1, y))
}
