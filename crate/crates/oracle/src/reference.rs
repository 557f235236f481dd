//! Reference values from integral representations and exact recursions.
//!
//! These are slow by design of the method (dense quadrature) and are only
//! meant for checking faster implementations.

use std::f64::consts::PI;

use crate::quadrature::{integrate, integrate_from_singular_origin};

/// `erf(x) = (2/√π) ∫_0^x exp(-t²) dt`.
pub fn erf(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    2.0 / PI.sqrt() * integrate(|t: f64| (-t * t).exp(), 0.0, x, 0.1)
}

/// `I_ν(x) = (1/π) ∫_0^π exp(x cos θ) cos(νθ) dθ` for integer `ν`.
pub fn bessel_i(order: u32, x: f64) -> f64 {
    let nu = order as f64;
    integrate(|t: f64| (x * t.cos()).exp() * (nu * t).cos(), 0.0, PI, PI / 128.0) / PI
}

/// `K_ν(x) = ∫_0^∞ exp(-x cosh t) cosh(νt) dt` for `x > 0`.
pub fn bessel_k(order: u32, x: f64) -> f64 {
    assert!(x > 0.0);
    let nu = order as f64;
    // exponent of the dominant branch: -x cosh t + ν t
    let exponent = |t: f64| -x * t.cosh() + nu * t;
    let peak = if nu > x { (nu / x).asinh() } else { 0.0 };
    let mut upper = peak + 1.0;
    while exponent(upper) > exponent(peak) - 60.0 {
        upper += 0.5;
    }
    integrate(
        |t: f64| 0.5 * (exponent(t).exp() + (-x * t.cosh() - nu * t).exp()),
        0.0,
        upper,
        0.05,
    )
}

/// Mean envelope `E|h|` of a unit-power Rician variable with factor `k`,
/// `h = √(k/(k+1)) + CN(0, 1/(k+1))`.
///
/// Integrates `r f(r)` with the envelope density written out in full and
/// `I_0` replaced by its angular integral, so no Bessel routine is involved.
pub fn rician_mean(k: f64) -> f64 {
    assert!(k >= 0.0);
    let scale = k + 1.0;
    let coupling = 2.0 * (k * scale).sqrt();
    let r_max = (k.sqrt() + 9.0) / scale.sqrt();
    let integrand = |r: f64| {
        let inner = integrate(
            |theta: f64| {
                let e = -k - scale * r * r + coupling * r * theta.cos();
                e.exp()
            },
            0.0,
            PI,
            PI / 32.0,
        );
        2.0 * scale / PI * r * r * inner
    };
    integrate(integrand, 0.0, r_max, 0.05)
}

/// `Ei(k) - γ - ln k = ∫_0^k (e^t - 1)/t dt` for `k ≥ 0`.
pub fn ein(k: f64) -> f64 {
    assert!(k >= 0.0);
    if k == 0.0 {
        return 0.0;
    }
    integrate(|t: f64| t.exp_m1() / t, 0.0, k, 0.1)
}

/// `ln Γ(x)` for integer or half-integer `x > 0`, by summing the logs of
/// the recursion factors down to `Γ(1) = 1` or `Γ(1/2) = √π`.
pub fn ln_gamma_recursion(x: f64) -> f64 {
    let doubled = 2.0 * x;
    assert!(
        x > 0.0 && doubled.fract() == 0.0,
        "recursion oracle needs an integer or half-integer argument"
    );
    let (mut acc, mut base) = if x.fract() == 0.0 {
        (0.0, 1.0)
    } else {
        (0.5 * PI.ln(), 0.5)
    };
    while base < x {
        acc += base.ln();
        base += 1.0;
    }
    acc
}

/// `Γ(x) = ∫_0^∞ t^(x-1) e^(-t) dt` for `x ≥ 1`.
pub fn gamma_integral(x: f64) -> f64 {
    assert!(x >= 1.0);
    let f = |t: f64| if t == 0.0 { if x == 1.0 { 1.0 } else { 0.0 } } else { ((x - 1.0) * t.ln() - t).exp() };
    let upper = x + 40.0 * x.sqrt() + 60.0;
    integrate_from_singular_origin(f, 1.0, 16) + integrate(f, 1.0, upper, 0.25)
}
