//! Streaming sample moments with deterministic merging.

/// Running count, mean and central moment sums up to fourth order.
///
/// Updates follow Welford/Terriberry; [`SampleMoments::merge`] uses the
/// pairwise formulas of Chan et al. and Pébay, so partial results from
/// chunks can be combined in any fixed tree order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleMoments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl SampleMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2 - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let na = self.n as f64;
        let nb = other.n as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let d4 = d2 * d2;
        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3 + other.m3 + d3 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        Self {
            n: self.n + other.n,
            mean,
            m2,
            m3,
            m4,
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error_of_mean(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.variance() / self.n as f64).sqrt()
    }

    /// Large-sample standard error of [`SampleMoments::variance`],
    /// `√((m4 − σ⁴ (n−3)/(n−1)) / n)`.
    pub fn std_error_of_variance(&self) -> f64 {
        if self.n < 4 {
            return f64::INFINITY;
        }
        let n = self.n as f64;
        let m4 = self.m4 / n;
        let var = self.variance();
        ((m4 - var * var * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }

    pub fn skewness(&self) -> f64 {
        let n = self.n as f64;
        if self.m2 == 0.0 {
            return 0.0;
        }
        n.sqrt() * self.m3 / self.m2.powf(1.5)
    }
}

impl Extend<f64> for SampleMoments {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

impl FromIterator<f64> for SampleMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Self::new();
        m.extend(iter);
        m
    }
}

/// Pairwise (balanced binary tree) reduction of `items` in index order.
///
/// The tree shape depends only on `items.len()`, which keeps floating-point
/// results independent of how the items were produced.
pub fn pairwise_reduce<T: Clone>(items: &[T], merge: &impl Fn(&T, &T) -> T) -> Option<T> {
    match items.len() {
        0 => None,
        1 => Some(items[0].clone()),
        len => {
            let (lo, hi) = items.split_at(len / 2);
            let a = pairwise_reduce(lo, merge)?;
            let b = pairwise_reduce(hi, merge)?;
            Some(merge(&a, &b))
        }
    }
}
