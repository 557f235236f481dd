//! Optimal surface phases, instantaneous SNR, and the Monte Carlo
//! estimators built on them.
//!
//! Estimators split the requested samples into fixed chunks of
//! [`CHUNK_SIZE`] draws. Chunk `i` always uses [`substream`]`(seed, i)` and
//! the per-chunk partial results are merged with a fixed pairwise tree, so
//! an estimate is bit-identical for any worker count.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{substream, ChannelRealization, ChannelSampler, FadingConfig, LinkGeometry, Scenario};
use crate::error::{Error, Result};
use crate::stats::{pairwise_reduce, SampleMoments};

pub const CHUNK_SIZE: u64 = 8192;
pub const MIN_SAMPLES: u64 = 1000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Phase shifts `θ_n = ∠(g / (h2,n h1,n))` in `[0, 2π)`.
///
/// These make every cascaded term `h2,n e^{jθ_n} h1,n` co-phased with `g`.
/// When `g = 0` the reference phase is taken as zero.
pub fn optimal_phases(r: &ChannelRealization) -> Result<Vec<f64>> {
    let reference = r.g.arg();
    r.h1.iter()
        .zip(&r.h2)
        .enumerate()
        .map(|(n, (h1, h2))| {
            if h1.norm_sqr() == 0.0 || h2.norm_sqr() == 0.0 {
                return Err(Error::Degenerate(format!("surface coefficient {n} is zero")));
            }
            Ok(wrap_phase(reference - h1.arg() - h2.arg()))
        })
        .collect()
}

fn wrap_phase(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// End-to-end response `h2ᵀ diag(e^{jθ}) h1 + g`.
pub fn aligned_response(r: &ChannelRealization, phases: &[f64]) -> Complex64 {
    let cascaded: Complex64 = r
        .h1
        .iter()
        .zip(&r.h2)
        .zip(phases)
        .map(|((h1, h2), theta)| h2 * Complex64::from_polar(1.0, *theta) * h1)
        .sum();
    cascaded + r.g
}

/// `Σ|h2,n||h1,n| + |g|`, the magnitude of the phase-aligned response.
pub fn coherent_amplitude(r: &ChannelRealization) -> f64 {
    cascaded_amplitude(r) + r.g.norm()
}

/// `Σ|h2,n||h1,n|`.
pub fn cascaded_amplitude(r: &ChannelRealization) -> f64 {
    r.h1.iter().zip(&r.h2).map(|(h1, h2)| h1.norm() * h2.norm()).sum()
}

/// Received SNR under optimal phases, `γ0 (Σ|h2,n||h1,n| + |g|)²`.
pub fn max_snr(r: &ChannelRealization, gamma0: f64) -> f64 {
    let a = coherent_amplitude(r);
    gamma0 * (a * a)
}

/// Monte Carlo point estimate with a 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub half_width_95: f64,
    pub n_samples: u64,
}

impl Estimate {
    fn from_moments(m: &SampleMoments) -> Self {
        Self {
            value: m.mean(),
            half_width_95: Z95 * m.std_error_of_mean(),
            n_samples: m.count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub estimate: Estimate,
    /// Number of draws that fell into outage.
    pub events: u64,
}

impl OutageEstimate {
    /// Fewer than 10 outage events; the normal-approximation interval is
    /// unreliable.
    pub fn few_events(&self) -> bool {
        self.events < 10
    }
}

/// Seeded, chunked Monte Carlo driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub n_samples: u64,
    pub seed: u64,
    /// Thread count; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl MonteCarlo {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self {
            workers: Some(workers),
            ..self
        }
    }

    /// `E{log2(1 + γ_max)}` in bits/s/Hz.
    pub fn ergodic_capacity(&self, scenario: &Scenario) -> Result<Estimate> {
        scenario.validate()?;
        let gamma0 = scenario.gamma0();
        let m = self.moments(&scenario.geometry, &scenario.fading, move |r| {
            max_snr(r, gamma0).ln_1p() / LN_2
        })?;
        Ok(Estimate::from_moments(&m))
    }

    /// `P(γ_max ≤ γ_th)`.
    pub fn outage(&self, scenario: &Scenario) -> Result<OutageEstimate> {
        scenario.validate()?;
        let gamma0 = scenario.gamma0();
        let gamma_th = scenario.radio.gamma_th();
        let events = self.fold(
            &scenario.geometry,
            &scenario.fading,
            || 0u64,
            |count, r| {
                if max_snr(r, gamma0) <= gamma_th {
                    *count += 1;
                }
            },
            |a, b| a + b,
        )?;
        let n = self.n_samples;
        let p = events as f64 / n as f64;
        Ok(OutageEstimate {
            estimate: Estimate {
                value: p,
                half_width_95: Z95 * (p * (1.0 - p) / n as f64).sqrt(),
                n_samples: n,
            },
            events,
        })
    }

    /// Sample moments of an arbitrary per-realization statistic.
    pub fn moments<F>(&self, geometry: &LinkGeometry, fading: &FadingConfig, statistic: F) -> Result<SampleMoments>
    where
        F: Fn(&ChannelRealization) -> f64 + Sync,
    {
        self.fold(
            geometry,
            fading,
            SampleMoments::new,
            |m, r| m.push(statistic(r)),
            |a, b| a.merge(b),
        )
    }

    /// General chunked reduction: `step` folds each realization of a chunk
    /// into a fresh accumulator from `init`, and chunk accumulators are
    /// combined pairwise with `merge` in chunk order.
    pub fn fold<T, I, S, M>(
        &self,
        geometry: &LinkGeometry,
        fading: &FadingConfig,
        init: I,
        step: S,
        merge: M,
    ) -> Result<T>
    where
        T: Clone + Send,
        I: Fn() -> T + Sync,
        S: Fn(&mut T, &ChannelRealization) + Sync,
        M: Fn(&T, &T) -> T + Sync,
    {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::invalid(
                "sample count",
                format!("need at least {MIN_SAMPLES} samples, got {}", self.n_samples),
            ));
        }
        let sampler = ChannelSampler::new(geometry, fading)?;
        let chunks = self.n_samples.div_ceil(CHUNK_SIZE);
        let run_chunk = |index: u64| {
            let len = CHUNK_SIZE.min(self.n_samples - index * CHUNK_SIZE);
            let mut rng = substream(self.seed, index);
            let mut realization = ChannelRealization::zeros(sampler.n_elements());
            let mut acc = init();
            for _ in 0..len {
                sampler.sample_into(&mut rng, &mut realization);
                step(&mut acc, &realization);
            }
            acc
        };
        let compute = || (0..chunks).into_par_iter().map(run_chunk).collect::<Vec<T>>();
        let partials = match self.workers {
            Some(workers) => rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::invalid("worker pool", e.to_string()))?
                .install(compute),
            None => compute(),
        };
        Ok(pairwise_reduce(&partials, &merge).expect("at least one chunk"))
    }
}

pub fn mc_ergodic_capacity(scenario: &Scenario, n_samples: u64, seed: u64) -> Result<Estimate> {
    MonteCarlo::new(n_samples, seed).ergodic_capacity(scenario)
}

pub fn mc_outage(scenario: &Scenario, n_samples: u64, seed: u64) -> Result<OutageEstimate> {
    MonteCarlo::new(n_samples, seed).outage(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{substream, ChannelSampler, RadioConfig};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(h1: Complex64, h2: Complex64, g: Complex64) -> ChannelRealization {
        ChannelRealization {
            h1: vec![h1],
            h2: vec![h2],
            g,
        }
    }

    #[test]
    fn aligned_unit_channel() {
        let r = single(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        assert_eq!(optimal_phases(&r).unwrap(), vec![0.0]);
        assert_eq!(max_snr(&r, 1.0), 4.0);
    }

    #[test]
    fn real_positive_channels_need_no_shift() {
        let r = ChannelRealization {
            h1: vec![c(0.5, 0.0), c(2.0, 0.0), c(1.5, 0.0)],
            h2: vec![c(1.0, 0.0), c(0.1, 0.0), c(3.0, 0.0)],
            g: c(0.7, 0.0),
        };
        assert!(optimal_phases(&r).unwrap().iter().all(|t| *t == 0.0));
    }

    #[test]
    fn zero_surface_coefficient_is_degenerate() {
        let r = single(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(optimal_phases(&r), Err(Error::Degenerate(_))));
    }

    #[test]
    fn no_direct_link() {
        let r = ChannelRealization {
            h1: vec![c(0.3, 0.4), c(1.0, -1.0)],
            h2: vec![c(2.0, 0.0), c(0.0, 0.5)],
            g: c(0.0, 0.0),
        };
        let want = 2.0 * (0.5 * 2.0 + 2f64.sqrt() * 0.5f64).powi(2);
        assert!((max_snr(&r, 2.0) - want).abs() < 1e-14);
        let phases = optimal_phases(&r).unwrap();
        assert!((aligned_response(&r, &phases).norm_sqr() * 2.0 / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phases_lie_in_half_open_circle() {
        assert_eq!(wrap_phase(-1e-18), 0.0);
        assert!(wrap_phase(-TAU) < TAU);
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn sample_count_floor() {
        let s = Scenario::default();
        assert!(MonteCarlo::new(999, 0).ergodic_capacity(&s).is_err());
        assert!(MonteCarlo::new(1000, 0).ergodic_capacity(&s).is_ok());
    }

    #[test]
    fn vanishing_power_gives_zero_capacity() {
        let s = Scenario {
            radio: RadioConfig {
                tx_power_dbm: -300.0,
                ..RadioConfig::default()
            },
            ..Scenario::default()
        };
        let est = MonteCarlo::new(4000, 1).ergodic_capacity(&s).unwrap();
        assert!(est.value >= 0.0 && est.value < 1e-6);
    }

    #[test]
    fn outage_extremes() {
        let mut s = Scenario::default();
        s.radio.gamma_th_db = -f64::INFINITY;
        // threshold of exactly zero in linear scale
        s.radio.gamma_th_db = -1000.0;
        let est = MonteCarlo::new(4000, 2).outage(&s).unwrap();
        assert_eq!(est.estimate.value, 0.0);
        assert!(est.few_events());
        s.radio.gamma_th_db = 300.0 + 10.0 * crate::analytic::mean_snr(&s).log10();
        let est = MonteCarlo::new(4000, 2).outage(&s).unwrap();
        assert_eq!(est.estimate.value, 1.0);
        assert_eq!(est.estimate.half_width_95, 0.0);
    }

    #[test]
    fn outage_monotone_in_threshold() {
        let mut s = Scenario::default();
        let mut last = 0.0;
        for th in [-10.0, 0.0, 5.0, 10.0, 12.0, 15.0, 20.0, 30.0] {
            s.radio.gamma_th_db = th;
            let p = MonteCarlo::new(5000, 9).outage(&s).unwrap().estimate.value;
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn worker_count_does_not_change_estimates() {
        let s = Scenario::default();
        let base = MonteCarlo::new(50_000, 11);
        let one = base.with_workers(1).ergodic_capacity(&s).unwrap();
        for w in [2, 8] {
            assert_eq!(base.with_workers(w).ergodic_capacity(&s).unwrap(), one);
        }
        let one = base.with_workers(1).outage(&s).unwrap();
        assert_eq!(base.with_workers(8).outage(&s).unwrap(), one);
    }

    #[test]
    fn power_of_two_snr_scaling_is_exact() {
        let s = Scenario::default();
        let sampler = ChannelSampler::new(&s.geometry, &s.fading).unwrap();
        let mut rng = substream(5, 0);
        let gamma0 = s.gamma0();
        let gamma_th = s.radio.gamma_th();
        for _ in 0..1000 {
            let r = sampler.sample(&mut rng);
            let base = max_snr(&r, gamma0);
            assert_eq!(max_snr(&r, 4.0 * gamma0), 4.0 * base);
            assert_eq!(base <= gamma_th, max_snr(&r, 4.0 * gamma0) <= 4.0 * gamma_th);
        }
    }

    proptest! {
        #[test]
        fn max_snr_matches_aligned_quadratic_form(seed in 0u64..1000, n in 1usize..64, k in 0.0f64..10.0) {
            let s = Scenario {
                fading: crate::channel::FadingConfig { k1: k, k2: k, n_elements: n, ..Default::default() },
                ..Scenario::default()
            };
            let sampler = ChannelSampler::new(&s.geometry, &s.fading).unwrap();
            let r = sampler.sample_nondegenerate(&mut substream(seed, 0));
            let phases = optimal_phases(&r).unwrap();
            prop_assert!(phases.iter().all(|t| (0.0..TAU).contains(t)));
            let gamma0 = s.gamma0();
            let direct = gamma0 * aligned_response(&r, &phases).norm_sqr();
            let via_envelopes = max_snr(&r, gamma0);
            prop_assert!((direct / via_envelopes - 1.0).abs() < 1e-12);
            prop_assert!(via_envelopes >= gamma0 * r.g.norm_sqr());
            let cascade = cascaded_amplitude(&r);
            prop_assert!(via_envelopes >= gamma0 * cascade * cascade);
        }

        #[test]
        fn snr_scales_linearly(seed in 0u64..1000, c in 1e-3f64..1e3) {
            let s = Scenario::default();
            let sampler = ChannelSampler::new(&s.geometry, &s.fading).unwrap();
            let r = sampler.sample(&mut substream(seed, 1));
            let g0 = s.gamma0();
            prop_assert!((max_snr(&r, c * g0) / (c * max_snr(&r, g0)) - 1.0).abs() < 1e-15);
        }

        #[test]
        fn los_phase_rotation_leaves_snr_unchanged(seed in 0u64..500, phi in -10.0f64..10.0) {
            let base = Scenario::default();
            let n = base.fading.n_elements;
            let mut rotated = base.clone();
            rotated.fading.los_phases.h1 = vec![phi; n];
            rotated.fading.los_phases.h2 = (0..n).map(|i| phi * i as f64).collect();
            let a = ChannelSampler::new(&base.geometry, &base.fading).unwrap().sample(&mut substream(seed, 0));
            let b = ChannelSampler::new(&rotated.geometry, &rotated.fading).unwrap().sample(&mut substream(seed, 0));
            let g0 = base.gamma0();
            prop_assert!((max_snr(&b, g0) / max_snr(&a, g0) - 1.0).abs() < 1e-13);
        }
    }
}
