//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `order`-point rule by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // three-term recurrence for P_n(z) and its derivative
                let (mut p0, mut p1) = (1.0, 0.0);
                for j in 0..order {
                    let p2 = p1;
                    p1 = p0;
                    let jf = j as f64;
                    p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                let dz = p0 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared 20-point rule.
    pub fn standard() -> &'static Self {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(20))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Single-panel integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integral over `[a, b]` split into `panels` equal panels.
    pub fn composite<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = a + width * i as f64;
                let hi = if i + 1 == panels { b } else { lo + width };
                self.integrate(f, lo, hi)
            })
            .sum()
    }
}

/// Integral over `[a, b]` with panels no wider than `max_width`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_width: f64) -> f64 {
    let panels = ((b - a).abs() / max_width).ceil().max(1.0) as usize;
    GaussLegendre::standard().composite(&f, a, b, panels)
}

/// Integral over `[0, b]` of a function with an integrable (logarithmic or
/// weaker) singularity at the origin.
///
/// Substitutes `x = b * v^4`, which multiplies the integrand by `v^3` and
/// turns a `ln x` singularity into a smooth one.
pub fn integrate_from_singular_origin<F: Fn(f64) -> f64>(f: F, b: f64, panels: usize) -> f64 {
    let g = |v: f64| 4.0 * b * v.powi(3) * f(b * v.powi(4));
    GaussLegendre::standard().composite(&g, 0.0, 1.0, panels)
}
