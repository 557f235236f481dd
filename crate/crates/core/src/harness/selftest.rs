//! Special functions against the quadrature and recursion references.

use std::f64::consts::PI;
use std::fmt;

use linklab_oracle::reference;

use crate::specfun::{self, bessel_i, bessel_k, ein_series, erf, laguerre_half, ln_gamma};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub points: usize,
    pub worst_error: f64,
    pub tolerance: f64,
    /// Whether `worst_error` is relative rather than absolute.
    pub relative: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst_error <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<34} {:>5} pts  worst {} error {:.2e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.points,
            if self.relative { "rel" } else { "abs" },
            self.worst_error,
            self.tolerance,
        )
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
}

fn rel(got: f64, want: f64) -> f64 {
    (got / want - 1.0).abs()
}

fn worst<I: IntoIterator<Item = f64>>(errors: I) -> (usize, f64) {
    errors
        .into_iter()
        .fold((0, 0.0f64), |(n, w), e| (n + 1, if e.is_nan() { f64::INFINITY } else { w.max(e) }))
}

fn check(name: &'static str, tolerance: f64, relative: bool, errors: impl IntoIterator<Item = f64>) -> Check {
    let (points, worst_error) = worst(errors);
    Check {
        name,
        points,
        worst_error,
        tolerance,
        relative,
    }
}

/// Runs every comparison. Takes a few seconds.
pub fn run() -> Vec<Check> {
    let nan = |r: crate::Result<f64>| r.unwrap_or(f64::NAN);
    vec![
        check(
            "erf on [-6, 6]",
            1e-12,
            false,
            (0..1000).map(|i| {
                let x = -6.0 + 12.0 * i as f64 / 999.0;
                (nan(erf(x)) - reference::erf(x)).abs()
            }),
        ),
        check(
            "I0, I1 on [1e-3, 20]",
            1e-10,
            true,
            (0..=1).flat_map(|order| {
                log_grid(1e-3, 20.0, 120).map(move |x| rel(nan(bessel_i(order, x)), reference::bessel_i(order, x)))
            }),
        ),
        check(
            "K0..K6 on [1e-3, 20]",
            1e-10,
            true,
            (0..=6).flat_map(|order| {
                log_grid(1e-3, 20.0, 120)
                    .map(move |x| rel(nan(bessel_k(order, x)), reference::bessel_k(order as u32, x)))
            }),
        ),
        check(
            "ln Gamma at n/2, n = 1..300",
            1e-12,
            false,
            (1..=300).map(|twice| {
                let x = twice as f64 / 2.0;
                let want = reference::ln_gamma_recursion(x);
                (nan(ln_gamma(x)) - want).abs() / want.abs().max(1.0)
            }),
        ),
        check(
            "ln Gamma by Euler integral",
            1e-12,
            false,
            [1.3, 2.7, 4.1, 9.9, 16.25]
                .map(|x| (nan(ln_gamma(x)) - reference::gamma_integral(x).ln()).abs()),
        ),
        check(
            "L_1/2(-K) Rician mean identity",
            1e-10,
            true,
            [0.0, 0.5, 1.0, 2.0, 5.0, 10.0].map(|k| {
                let model = (PI / (4.0 * (k + 1.0))).sqrt() * nan(laguerre_half(-k));
                rel(model, reference::rician_mean(k))
            }),
        ),
        check(
            "Ein by quadrature",
            1e-10,
            true,
            [0.01, 0.3, 1.0, 2.5, 7.0, 15.0, 30.0, 39.0].map(|k| rel(nan(ein_series(k)), reference::ein(k))),
        ),
        check(
            "Ein(1) = Ei(1) - Euler gamma",
            1e-13,
            true,
            [rel(nan(ein_series(1.0)), 1.895_117_816_355_936_8 - specfun::EULER_GAMMA)],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_counts_as_failure() {
        let c = check("x", 1.0, true, [0.1, f64::NAN]);
        assert!(!c.passed());
        assert_eq!(c.points, 2);
    }
}
