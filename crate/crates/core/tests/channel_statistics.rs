mod common;

use std::f64::consts::PI;

use linklab::channel::{envelope_means, Hop};
use linklab::{MonteCarlo, RayleighConvention, Scenario};
use linklab_oracle::reference;

use common::{normalized, reference as reference_point};

fn within_3se(m: &linklab::stats::SampleMoments, want: f64) -> bool {
    (m.mean() - want).abs() <= 3.0 * m.std_error_of_mean()
}

#[test]
fn unit_average_power_per_coefficient() {
    for k in [0.0, 1.0, 5.0] {
        let s = normalized(4, k);
        let mc = MonteCarlo::new(100_000, 1);
        let h1 = mc.moments(&s.geometry, &s.fading, |r| r.h1[2].norm_sqr()).unwrap();
        let h2 = mc.moments(&s.geometry, &s.fading, |r| r.h2[0].norm_sqr()).unwrap();
        let g = mc.moments(&s.geometry, &s.fading, |r| r.g.norm_sqr()).unwrap();
        assert!(within_3se(&h1, 1.0), "K={k}: {}", h1.mean());
        assert!(within_3se(&h2, 1.0), "K={k}: {}", h2.mean());
        assert!(within_3se(&g, 1.0), "{}", g.mean());
    }
}

#[test]
fn unit_component_doubles_direct_power() {
    let mut s = normalized(1, 1.0);
    s.fading.rayleigh_convention = RayleighConvention::UnitComponent;
    let mc = MonteCarlo::new(100_000, 2);
    let g = mc.moments(&s.geometry, &s.fading, |r| r.g.norm_sqr()).unwrap();
    assert!(within_3se(&g, 2.0), "{}", g.mean());
    let env = mc.moments(&s.geometry, &s.fading, |r| r.g.norm()).unwrap();
    assert!(within_3se(&env, (PI / 2.0).sqrt()), "{}", env.mean());
}

#[test]
fn path_loss_scales_average_power() {
    let s = reference_point(1, 1.0);
    let mc = MonteCarlo::new(100_000, 3);
    for (hop, stat) in [
        (Hop::ToSurface, (|r: &linklab::ChannelRealization| r.h1[0].norm_sqr()) as fn(&_) -> f64),
        (Hop::FromSurface, |r| r.h2[0].norm_sqr()),
        (Hop::Direct, |r| r.g.norm_sqr()),
    ] {
        let m = mc.moments(&s.geometry, &s.fading, stat).unwrap();
        let want = 1.0 / s.geometry.path_loss(hop);
        assert!(within_3se(&m, want), "{hop:?}: {} vs {want}", m.mean());
    }
}

#[test]
fn rician_envelope_mean_at_k1_matches_integral() {
    let s = normalized(1, 1.0);
    let m = MonteCarlo::new(1_000_000, 4)
        .moments(&s.geometry, &s.fading, |r| r.h1[0].norm())
        .unwrap();
    let want = reference::rician_mean(1.0);
    assert!(within_3se(&m, want), "{} vs {want}", m.mean());
}

#[test]
fn envelope_means_match_sampler() {
    for (i, k) in [0.0, 1.0, 5.0].into_iter().enumerate() {
        let s = normalized(1, k);
        let want = envelope_means(&s.geometry, &s.fading);
        let mc = MonteCarlo::new(1_000_000, 10 + i as u64);
        let h1 = mc.moments(&s.geometry, &s.fading, |r| r.h1[0].norm()).unwrap();
        let h2 = mc.moments(&s.geometry, &s.fading, |r| r.h2[0].norm()).unwrap();
        let g = mc.moments(&s.geometry, &s.fading, |r| r.g.norm()).unwrap();
        assert!(within_3se(&h1, want.h1), "K={k}: {} vs {}", h1.mean(), want.h1);
        assert!(within_3se(&h2, want.h2), "K={k}: {} vs {}", h2.mean(), want.h2);
        assert!(within_3se(&g, want.g), "{} vs {}", g.mean(), want.g);
    }
}

#[test]
fn line_of_sight_component_is_the_mean() {
    let k = 3.0;
    let s = normalized(1, k);
    let mc = MonteCarlo::new(200_000, 5);
    let re = mc.moments(&s.geometry, &s.fading, |r| r.h1[0].re).unwrap();
    let im = mc.moments(&s.geometry, &s.fading, |r| r.h1[0].im).unwrap();
    assert!(within_3se(&re, (k / (k + 1.0)).sqrt()), "{}", re.mean());
    assert!(within_3se(&im, 0.0), "{}", im.mean());
    // the scattered part of each quadrature has variance 1 / (2(K+1))
    assert!((re.variance() - 0.125).abs() <= 3.0 * re.std_error_of_variance());
}

#[test]
fn elements_are_uncorrelated() {
    let s = normalized(2, 0.0);
    let m = MonteCarlo::new(100_000, 6)
        .moments(&s.geometry, &s.fading, |r| (r.h1[0] * r.h1[1].conj()).re)
        .unwrap();
    assert!(within_3se(&m, 0.0), "{}", m.mean());
}

#[test]
fn default_scenario_is_valid() {
    Scenario::default().validate().unwrap();
}
