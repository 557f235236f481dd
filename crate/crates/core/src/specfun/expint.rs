use super::{EULER_GAMMA, SERIES_EPS, SERIES_MAX_TERMS};
use crate::error::{Error, Result};

// Power series up to here, asymptotic Ei expansion beyond.
const POWER_SERIES_LIMIT: f64 = 40.0;

/// `Σ_{n≥1} K^n / (n · n!)`, which equals `Ei(K) − γ − ln K` for `K > 0`
/// and is exactly zero at `K = 0`.
pub fn ein_series(k: f64) -> Result<f64> {
    if k < 0.0 || !k.is_finite() {
        return Err(Error::domain("ein_series", k, "finite K >= 0"));
    }
    if k <= POWER_SERIES_LIMIT {
        Ok(ein_power_series(k, SERIES_MAX_TERMS).0)
    } else {
        Ok(ei_asymptotic(k) - EULER_GAMMA - k.ln())
    }
}

/// Power series truncated by the usual rule or at `max_terms`; returns the
/// sum and the number of terms used.
pub(crate) fn ein_power_series(k: f64, max_terms: usize) -> (f64, usize) {
    if k == 0.0 {
        return (0.0, 0);
    }
    let mut power = 1.0; // K^n / n!
    let mut sum = 0.0;
    let mut used = 0;
    for n in 1..=max_terms {
        power *= k / n as f64;
        let term = power / n as f64;
        sum += term;
        used = n;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    (sum, used)
}

/// `Ei(x) ≈ e^x/x Σ k!/x^k`, stopped at the smallest term.
fn ei_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        let next = term * k as f64 / x;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    x.exp() / x * sum
}
