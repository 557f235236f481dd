//! Closed-form performance expressions.
//!
//! All formulas are written with the effective path losses
//! `L_l = d_l^{α_l} / C0` from [`LinkGeometry::path_loss`], so the 1 m
//! reference gain enters every expression exactly as it enters the sampler.
//!
//! Quantities that should be symmetric in the two surface hops are built
//! from pairwise products and sums (`a * b`, `a + b`), which commute exactly
//! in IEEE arithmetic; swapping the hops therefore reproduces results to the
//! last bit.

use std::f64::consts::PI;

use log::warn;

use crate::channel::{laguerre, Hop, LinkGeometry, RayleighConvention, Scenario};
use crate::error::{Error, Result};
use crate::specfun::{self, ein_series, erfc_unchecked, ln_bessel_k_sequence, ln_gamma};

/// Per-element moments of `|h2,n||h1,n|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltMoments {
    pub mu: f64,
    pub sigma2: f64,
}

/// Near-origin law of the per-branch SNR density and the resulting
/// diversity order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrLaw {
    pub a_coeff: f64,
    pub t_order: u32,
    pub diversity: u32,
}

/// Value of a truncated series with a convergence indicator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// The outermost retained terms were negligible relative to the sum.
    pub converged: bool,
}

pub const DEFAULT_PDF_TRUNCATION: usize = 30;

// relative size of the last retained shell that counts as converged
const PDF_TAIL_TOLERANCE: f64 = 1e-13;
// probabilities outside [0, 1] by more than this are logged
const CLAMP_WARN: f64 = 1e-12;

struct HopPair {
    /// `L_{1/2}(-K1) · L_{1/2}(-K2)`
    laguerre: f64,
    /// `(K1+1)(K2+1)`
    k_factor: f64,
    /// `L_1 · L_2`
    loss: f64,
}

impl HopPair {
    fn new(scenario: &Scenario) -> Self {
        let f = &scenario.fading;
        let g = &scenario.geometry;
        Self {
            laguerre: laguerre(f.k1) * laguerre(f.k2),
            k_factor: (f.k1 + 1.0) * (f.k2 + 1.0),
            loss: g.path_loss(Hop::ToSurface) * g.path_loss(Hop::FromSurface),
        }
    }

    /// `E|h1||h2|`
    fn mean_product(&self) -> f64 {
        PI * self.laguerre / (4.0 * (self.loss * self.k_factor).sqrt())
    }
}

/// `(E|g|, E|g|²)` in the form used by the closed forms.
///
/// Under [`RayleighConvention::UnitComponent`] the power term keeps
/// `1/d3^α3` while the mean uses a unit per-component variance.
fn direct_moments(geometry: &LinkGeometry, convention: RayleighConvention) -> (f64, f64) {
    let loss = geometry.path_loss(Hop::Direct);
    let mean = (convention.direct_power() * PI / (4.0 * loss)).sqrt();
    (mean, 1.0 / loss)
}

/// Rayleigh scale `b` of `F_|g|(x) = 1 − exp(−x²/(2b))`.
fn direct_rayleigh_scale(geometry: &LinkGeometry, convention: RayleighConvention) -> f64 {
    convention.direct_power() / (2.0 * geometry.path_loss(Hop::Direct))
}

/// `E{γ_max} = γ0 (x1 + x2 + x3)` with
/// `x1 = E|g|²`, `x2 = N E|h1|²E|h2|² + N(N−1)(E|h1|E|h2|)²` and
/// `x3 = 2N E|h1|E|h2| E|g|`.
pub fn mean_snr(scenario: &Scenario) -> f64 {
    let pair = HopPair::new(scenario);
    let n = scenario.fading.n_elements as f64;
    let (g_mean, g_power) = direct_moments(&scenario.geometry, scenario.fading.rayleigh_convention);
    let m = pair.mean_product();
    let x1 = g_power;
    let x2 = n / pair.loss + n * (n - 1.0) * (m * m);
    let x3 = 2.0 * n * m * g_mean;
    scenario.gamma0() * (x1 + x2 + x3)
}

/// Jensen upper bound on the ergodic capacity, `log2(1 + E{γ_max})`.
pub fn capacity_upper_bound(scenario: &Scenario) -> f64 {
    mean_snr(scenario).ln_1p() / std::f64::consts::LN_2
}

/// Large-`N` effective SNR `γ1` with `C_up ≈ log2(γ1 N²)`.
pub fn effective_snr_gain(scenario: &Scenario) -> f64 {
    let m = HopPair::new(scenario).mean_product();
    scenario.gamma0() * (m * m)
}

pub fn clt_moments(scenario: &Scenario) -> CltMoments {
    let pair = HopPair::new(scenario);
    let mu = pair.mean_product();
    let sigma2 = (1.0 - PI * PI * (pair.laguerre * pair.laguerre) / (16.0 * pair.k_factor)) / pair.loss;
    CltMoments { mu, sigma2 }
}

/// Outage probability with the cascaded sum replaced by its Gaussian
/// approximation `N(Nμ, Nσ²)` and convolved exactly with the Rayleigh
/// envelope of the direct path.
///
/// With `t = √(γ_th/γ0)`, `c = t − Nμ`, `s² = Nσ²` and Rayleigh scale `b`:
///
/// ```text
/// P = ½ erfc(−c/√(2s²))
///   − exp(−c²/(2(b+s²))) / (2√(1+s²/b)) · erfc(−c/√(2s²(1+s²/b)))
/// ```
///
/// The result is clamped to `[0, 1]`.
pub fn outage_clt(scenario: &Scenario) -> f64 {
    let CltMoments { mu, sigma2 } = clt_moments(scenario);
    let n = scenario.fading.n_elements as f64;
    let b = direct_rayleigh_scale(&scenario.geometry, scenario.fading.rayleigh_convention);
    let t = (scenario.radio.gamma_th() / scenario.gamma0()).sqrt();
    let c = t - n * mu;
    let s2 = n * sigma2;
    let spread = 1.0 + s2 / b;
    let gaussian = 0.5 * erfc_unchecked(-c / (2.0 * s2).sqrt());
    let correction = (-c * c / (2.0 * (b + s2))).exp() / (2.0 * spread.sqrt())
        * erfc_unchecked(-c / (2.0 * s2 * spread).sqrt());
    clamp_probability(gaussian - correction, "outage_clt")
}

fn clamp_probability(p: f64, what: &str) -> f64 {
    if !(-CLAMP_WARN..=1.0 + CLAMP_WARN).contains(&p) {
        warn!("{what}: value {p:e} outside [0, 1] clamped");
    }
    p.clamp(0.0, 1.0)
}

/// Density of `β = X·Y`, where `X` and `Y` are squared envelopes of
/// unit-power Rician variables with factors `k1` and `k2`:
///
/// ```text
/// f(β) = 2c e^{−(K1+K2)} Σ_{n,p} K1^n K2^p / (n!p!)² (√(cβ))^{n+p} K_{n−p}(2√(cβ)),
/// c = (K1+1)(K2+1)
/// ```
///
/// summed over `0 ≤ n, p ≤ truncation`. Terms are evaluated in log space.
pub fn product_rician_pdf(beta: f64, k1: f64, k2: f64, truncation: usize) -> Result<SeriesValue> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::domain("product_rician_pdf", beta, "finite beta > 0"));
    }
    for k in [k1, k2] {
        if k < 0.0 || !k.is_finite() {
            return Err(Error::domain("product_rician_pdf", k, "finite K >= 0"));
        }
    }
    if truncation == 0 {
        return Err(Error::invalid("truncation", "must be at least 1"));
    }
    let c = (k1 + 1.0) * (k2 + 1.0);
    let s = (c * beta).sqrt();
    let ln_s = s.ln();
    let max_n = if k1 == 0.0 { 0 } else { truncation };
    let max_p = if k2 == 0.0 { 0 } else { truncation };
    let ln_k = ln_bessel_k_sequence(max_n.max(max_p), 2.0 * s);
    // log-factorials
    let ln_fact: Vec<f64> = (0..=truncation).map(|i| ln_gamma(i as f64 + 1.0).expect("positive")).collect();
    let ln_weight = |k: f64, i: usize| if i == 0 { 0.0 } else { i as f64 * k.ln() - 2.0 * ln_fact[i] };

    let prefactor = (2.0 * c).ln() - (k1 + k2);
    let mut total = 0.0;
    let mut outer_shell = 0.0;
    for n in 0..=max_n {
        let wn = ln_weight(k1, n);
        for p in 0..=max_p {
            let ln_term = prefactor + wn + ln_weight(k2, p) + (n + p) as f64 * ln_s + ln_k[n.abs_diff(p)];
            let term = ln_term.exp();
            total += term;
            if (n == max_n && max_n > 0) || (p == max_p && max_p > 0) {
                outer_shell += term;
            }
        }
    }
    Ok(SeriesValue {
        value: total,
        converged: outer_shell <= PDF_TAIL_TOLERANCE * total,
    })
}

/// Coefficient `a` of the near-origin law, computed as
///
/// ```text
/// a = c e^{−(K1+K2)} [Ein(K1) + Ein(K2) + 2 K_0(2√(c / (L1 L2 γ0)))]
/// ```
///
/// with `Ein(K) = Ei(K) − γ − ln K` from [`ein_series`], which stays finite
/// at `K = 0`.
pub fn near_origin_coefficient(scenario: &Scenario) -> HighSnrLaw {
    let f = &scenario.fading;
    let pair = HopPair::new(scenario);
    let ein = ein_series(f.k1).expect("validated K") + ein_series(f.k2).expect("validated K");
    let arg = 2.0 * (pair.k_factor / (pair.loss * scenario.gamma0())).sqrt();
    let k0 = specfun::bessel_k(0, arg).expect("positive argument");
    let a_coeff = pair.k_factor * (-(f.k1 + f.k2)).exp() * (ein + 2.0 * k0);
    HighSnrLaw {
        a_coeff,
        t_order: 0,
        diversity: f.n_elements as u32 + 1,
    }
}

/// High-SNR outage law
///
/// ```text
/// P = √π a^N L1^N L2^N L3 / (Γ(N + 3/2) (N+1)!) · (2γ0/γ_th)^{−(N+1)}
/// ```
///
/// evaluated in log space and clamped to `[0, 1]`.
pub fn outage_high_snr(scenario: &Scenario) -> f64 {
    let law = near_origin_coefficient(scenario);
    let pair = HopPair::new(scenario);
    let n = scenario.fading.n_elements as f64;
    let direct = scenario.geometry.path_loss(Hop::Direct);
    let ln_p = 0.5 * PI.ln() + n * (law.a_coeff.ln() + pair.loss.ln()) + direct.ln()
        - ln_gamma(n + 1.5).expect("positive")
        - ln_gamma(n + 2.0).expect("positive")
        - (n + 1.0) * (2.0 * scenario.gamma0() / scenario.radio.gamma_th()).ln();
    ln_p.min(0.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FadingConfig, RadioConfig};

    fn normalized(k: f64, n: usize, convention: RayleighConvention) -> Scenario {
        let radio = RadioConfig::default();
        Scenario {
            geometry: LinkGeometry {
                d1: 1.0,
                d2: 1.0,
                d3: 1.0,
                ref_loss_db: 0.0,
                ..LinkGeometry::default()
            },
            fading: FadingConfig {
                k1: k,
                k2: k,
                n_elements: n,
                rayleigh_convention: convention,
                ..FadingConfig::default()
            },
            // γ0 = 1
            radio: RadioConfig {
                tx_power_dbm: radio.noise_power_dbm(),
                ..radio
            },
        }
    }

    #[test]
    fn mean_snr_single_element_rayleigh() {
        let verbatim = normalized(0.0, 1, RayleighConvention::UnitComponent);
        let want = 2.0 + (PI.powi(3) / 8.0).sqrt();
        assert!((mean_snr(&verbatim) - want).abs() < 1e-12);
        assert!((want - 3.9687).abs() < 1e-4);
        assert!((capacity_upper_bound(&verbatim) - (1.0 + want).log2()).abs() < 1e-12);
        assert!((capacity_upper_bound(&verbatim) - 2.3129).abs() < 1e-4);

        let unit = normalized(0.0, 1, RayleighConvention::UnitPower);
        let want = 2.0 + PI.powf(1.5) / 4.0;
        assert!((mean_snr(&unit) - want).abs() < 1e-12);
        assert!((want - 3.3920).abs() < 1e-4);
    }

    #[test]
    fn clt_moments_rayleigh() {
        let m = clt_moments(&normalized(0.0, 4, RayleighConvention::UnitPower));
        assert!((m.mu - PI / 4.0).abs() < 1e-15);
        assert!((m.sigma2 - (1.0 - PI * PI / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn clt_at_mean_threshold() {
        let mut s = normalized(1.0, 16, RayleighConvention::UnitComponent);
        let m = clt_moments(&s);
        let n = 16.0;
        // pick γ_th so that √(γ_th/γ0) = Nμ
        s.radio.gamma_th_db = 10.0 * ((n * m.mu).powi(2) * s.gamma0()).log10();
        let want = 0.5 - 0.5 / (1.0 + n * m.sigma2 * s.geometry.path_loss(Hop::Direct)).sqrt();
        assert!((outage_clt(&s) - want).abs() < 1e-12, "{} vs {want}", outage_clt(&s));
    }

    #[test]
    fn clt_vanishes_for_tiny_threshold() {
        let mut s = Scenario::default();
        s.radio.gamma_th_db = -200.0;
        assert!(outage_clt(&s) <= 1e-6);
    }

    #[test]
    fn pdf_rayleigh_reduces_to_k0() {
        for beta in [1e-6, 0.01, 0.3, 1.0, 4.0, 25.0] {
            let got = product_rician_pdf(beta, 0.0, 0.0, 30).unwrap();
            let want = 2.0 * specfun::bessel_k(0, 2.0 * beta.sqrt()).unwrap();
            assert!((got.value / want - 1.0).abs() < 1e-10);
            assert!(got.converged);
        }
    }

    #[test]
    fn pdf_domain() {
        assert!(product_rician_pdf(0.0, 1.0, 1.0, 30).is_err());
        assert!(product_rician_pdf(-1.0, 1.0, 1.0, 30).is_err());
        assert!(product_rician_pdf(1.0, -1.0, 1.0, 30).is_err());
        assert!(product_rician_pdf(1.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn pdf_truncation_flag() {
        assert!(product_rician_pdf(1.0, 5.0, 5.0, 30).unwrap().converged);
        assert!(!product_rician_pdf(1.0, 5.0, 5.0, 2).unwrap().converged);
    }

    #[test]
    fn coefficient_rayleigh_and_symmetry() {
        let s = normalized(0.0, 3, RayleighConvention::UnitPower);
        let law = near_origin_coefficient(&s);
        let want = 2.0 * specfun::bessel_k(0, 2.0 / s.gamma0().sqrt()).unwrap();
        assert_eq!(law.a_coeff, want);
        assert_eq!(law.t_order, 0);
        assert_eq!(law.diversity, 4);

        let mut s = Scenario::default();
        s.fading.k1 = 1.0;
        s.fading.k2 = 5.0;
        let mut t = s.clone();
        t.fading.k1 = 5.0;
        t.fading.k2 = 1.0;
        assert_eq!(near_origin_coefficient(&s), near_origin_coefficient(&t));
    }

    #[test]
    fn high_snr_single_element_reduction() {
        let mut s = Scenario::default();
        s.fading.k1 = 0.0;
        s.fading.k2 = 0.0;
        s.fading.n_elements = 1;
        s.radio.tx_power_dbm = 30.0;
        let a = near_origin_coefficient(&s).a_coeff;
        let l = |h| s.geometry.path_loss(h);
        let gamma_ratio = s.radio.gamma_th() / (2.0 * s.gamma0());
        // Γ(5/2) = 3√π/4
        let want = PI.sqrt() * a * l(Hop::ToSurface) * l(Hop::FromSurface) * l(Hop::Direct)
            / (0.75 * PI.sqrt() * 2.0)
            * gamma_ratio
            * gamma_ratio;
        assert!((outage_high_snr(&s) / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_clamped() {
        let mut s = Scenario::default();
        s.radio.tx_power_dbm = -80.0;
        assert_eq!(outage_high_snr(&s), 1.0);
        assert!((0.0..=1.0).contains(&outage_clt(&s)));
    }
}
