#![allow(dead_code)]

use std::f64::consts::PI;

use linklab::analytic::{outage_clt, product_rician_pdf, DEFAULT_PDF_TRUNCATION};
use linklab::channel::Hop;
use linklab::link::{cascaded_amplitude, max_snr};
use linklab::{MonteCarlo, Scenario};
use linklab_oracle::quadrature::{integrate, integrate_from_singular_origin};

/// Reference operating point with `n` elements and `K1 = K2 = k`.
pub fn reference(n: usize, k: f64) -> Scenario {
    let mut s = Scenario::default();
    s.fading.n_elements = n;
    s.fading.k1 = k;
    s.fading.k2 = k;
    s
}

/// Unit distances and a 0 dB reference loss, so every link has unit
/// average power scale.
pub fn normalized(n: usize, k: f64) -> Scenario {
    let mut s = reference(n, k);
    s.geometry.d1 = 1.0;
    s.geometry.d2 = 1.0;
    s.geometry.d3 = 1.0;
    s.geometry.ref_loss_db = 0.0;
    s
}

/// Largest `|outage_clt − empirical CDF|` over the 1%..99% sample
/// quantiles of `n_samples` draws of the received SNR.
pub fn clt_error_empirical(s: &Scenario, n_samples: u64, seed: u64) -> f64 {
    let gamma0 = s.gamma0();
    let mut snr = MonteCarlo::new(n_samples, seed)
        .fold(
            &s.geometry,
            &s.fading,
            Vec::new,
            |acc: &mut Vec<f64>, r| acc.push(max_snr(r, gamma0)),
            |a, b| [a.as_slice(), b.as_slice()].concat(),
        )
        .unwrap();
    snr.sort_by(f64::total_cmp);
    let mut at = s.clone();
    (1..100)
        .map(|pct| {
            let idx = pct * snr.len() / 100;
            at.radio.gamma_th_db = 10.0 * snr[idx].log10();
            let empirical = (idx + 1) as f64 / snr.len() as f64;
            (outage_clt(&at) - empirical).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest CLT error over thresholds with true outage in [0.01, 0.99],
/// against a conditional Monte Carlo estimate: given the cascaded sum `S`,
/// the outage probability is the exact Rayleigh CDF of `|g|` at `t − S`.
pub fn clt_error_conditional(s: &Scenario, n_samples: u64, seed: u64) -> f64 {
    let power = s.fading.rayleigh_convention.direct_power() / s.geometry.path_loss(Hop::Direct);
    let m = linklab::analytic::clt_moments(s);
    let n = s.fading.n_elements as f64;
    let mean = n * m.mu + (PI * power / 4.0).sqrt();
    let sd = (n * m.sigma2 + power * (1.0 - PI / 4.0)).sqrt();
    let thresholds: Vec<f64> = (0..=160)
        .map(|i| mean + sd * (-4.0 + 0.05 * i as f64))
        .filter(|t| *t > 0.0)
        .collect();
    let sums = MonteCarlo::new(n_samples, seed)
        .fold(
            &s.geometry,
            &s.fading,
            || vec![0.0; thresholds.len()],
            |acc: &mut Vec<f64>, r| {
                let c = cascaded_amplitude(r);
                for (a, t) in acc.iter_mut().zip(&thresholds) {
                    if *t > c {
                        let x = t - c;
                        *a -= (-(x * x) / power).exp_m1();
                    }
                }
            },
            |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect(),
        )
        .unwrap();
    let gamma0 = s.gamma0();
    let mut at = s.clone();
    thresholds
        .iter()
        .zip(&sums)
        .filter_map(|(t, sum)| {
            let p = sum / n_samples as f64;
            if !(0.01..=0.99).contains(&p) {
                return None;
            }
            at.radio.gamma_th_db = 10.0 * (t * t * gamma0).log10();
            Some((outage_clt(&at) - p).abs())
        })
        .fold(0.0, f64::max)
}

pub fn pdf(beta: f64, k1: f64, k2: f64) -> f64 {
    product_rician_pdf(beta, k1, k2, DEFAULT_PDF_TRUNCATION).unwrap().value
}

/// `∫_a^b f_β` by Gauss–Legendre quadrature; `a = 0` is handled with a
/// substitution that absorbs the logarithmic singularity.
pub fn pdf_mass(a: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let f = |x: f64| pdf(x, k1, k2);
    if a == 0.0 {
        integrate_from_singular_origin(f, b, 16)
    } else {
        integrate(f, a, b, (b - a).min(b * 0.05))
    }
}

/// Total mass of the truncated density over `(0, 400]`, split into
/// doubling intervals.
pub fn pdf_total_mass(k1: f64, k2: f64) -> f64 {
    let mut total = pdf_mass(0.0, 1e-4, k1, k2);
    let mut a = 1e-4;
    while a < 400.0 {
        total += pdf_mass(a, 2.0 * a, k1, k2);
        a *= 2.0;
    }
    total
}
