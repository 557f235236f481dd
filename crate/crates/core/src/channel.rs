//! Link geometry, fading and radio configuration, and seeded sampling of
//! channel realizations.
//!
//! The two surface hops are Rician with factors `k1`, `k2`; the direct hop is
//! Rayleigh. Every hop carries the large-scale gain `C0 / d^α`, where `C0` is
//! the reference gain at 1 m. The analytic formulas consume the same gains
//! through [`LinkGeometry::path_loss`], which returns `d^α / C0`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::specfun;

/// One of the three propagation hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    /// Transmitter to surface (`h1`).
    ToSurface,
    /// Surface to receiver (`h2`).
    FromSurface,
    /// Transmitter to receiver (`g`).
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkGeometry {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Gain at the 1 m reference distance, in dB.
    pub ref_loss_db: f64,
}

impl Default for LinkGeometry {
    fn default() -> Self {
        Self {
            d1: 150.0,
            d2: 150.0,
            d3: 200.0,
            alpha1: 2.0,
            alpha2: 2.0,
            alpha3: 3.5,
            ref_loss_db: -30.0,
        }
    }
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, d) in [("d1", self.d1), ("d2", self.d2), ("d3", self.d3)] {
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::invalid("geometry", format!("{name} must be positive and finite (got {d})")));
            }
        }
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2), ("alpha3", self.alpha3)] {
            if !(1.0..=6.0).contains(&a) {
                return Err(Error::invalid("geometry", format!("{name} must lie in [1, 6] (got {a})")));
            }
        }
        if !self.ref_loss_db.is_finite() || self.ref_loss_db > 0.0 {
            return Err(Error::invalid(
                "geometry",
                format!("ref_loss_db must be finite and <= 0 (got {})", self.ref_loss_db),
            ));
        }
        Ok(())
    }

    /// Linear reference gain `C0`.
    pub fn ref_gain(&self) -> f64 {
        10f64.powf(self.ref_loss_db / 10.0)
    }

    /// Linear path loss `d^α / C0` of a hop (inverse of its mean power gain).
    pub fn path_loss(&self, hop: Hop) -> f64 {
        let (d, alpha) = match hop {
            Hop::ToSurface => (self.d1, self.alpha1),
            Hop::FromSurface => (self.d2, self.alpha2),
            Hop::Direct => (self.d3, self.alpha3),
        };
        d.powf(alpha) / self.ref_gain()
    }

    /// Geometry with the two surface hops exchanged.
    pub fn with_hops_swapped(&self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            ..self.clone()
        }
    }
}

/// Scale of the Rayleigh direct-path coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RayleighConvention {
    /// `E|h̃3|² = 1`; every closed form is derived consistently with it.
    #[default]
    UnitPower,
    /// Each quadrature component of `h̃3` has unit variance (`E|h̃3|² = 2`).
    /// The closed forms then keep the printed constants: `E|g|² = 1/d3^α3`
    /// in the capacity bound, `E|g| = √(π/(2 d3^α3))` and
    /// `F_|g|(x) = 1 - exp(-d3^α3 x²/2)`.
    UnitComponent,
}

impl RayleighConvention {
    /// `E|h̃3|²`.
    pub fn direct_power(self) -> f64 {
        match self {
            RayleighConvention::UnitPower => 1.0,
            RayleighConvention::UnitComponent => 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RayleighConvention::UnitPower => "unit_power",
            RayleighConvention::UnitComponent => "unit_component",
        }
    }
}

/// Phases of the unit-modulus LOS entries. An empty vector means all zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LosPhases {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub k1: f64,
    pub k2: f64,
    pub n_elements: usize,
    pub rayleigh_convention: RayleighConvention,
    pub los_phases: LosPhases,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self {
            k1: 1.0,
            k2: 1.0,
            n_elements: 32,
            rayleigh_convention: RayleighConvention::UnitPower,
            los_phases: LosPhases::default(),
        }
    }
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::invalid("fading", "n_elements must be at least 1"));
        }
        for (name, k) in [("k1", self.k1), ("k2", self.k2)] {
            if k < 0.0 || !k.is_finite() {
                return Err(Error::invalid("fading", format!("{name} must be finite and >= 0 (got {k})")));
            }
        }
        for (name, phases) in [("h1", &self.los_phases.h1), ("h2", &self.los_phases.h2)] {
            if !phases.is_empty() && phases.len() != self.n_elements {
                return Err(Error::invalid(
                    "fading",
                    format!("{name} LOS phases: expected {} entries, got {}", self.n_elements, phases.len()),
                ));
            }
            if phases.iter().any(|p| !p.is_finite()) {
                return Err(Error::invalid("fading", format!("{name} LOS phases must be finite")));
            }
        }
        Ok(())
    }

    pub fn with_hops_swapped(&self) -> Self {
        Self {
            k1: self.k2,
            k2: self.k1,
            los_phases: LosPhases {
                h1: self.los_phases.h2.clone(),
                h2: self.los_phases.h1.clone(),
            },
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
    /// Outage threshold in dB.
    pub gamma_th_db: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            tx_power_dbm: 0.0,
            bandwidth_hz: 180e3,
            noise_psd_dbm_hz: -173.0,
            gamma_th_db: 10.0,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tx_power_dbm", self.tx_power_dbm),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_psd_dbm_hz", self.noise_psd_dbm_hz),
            ("gamma_th_db", self.gamma_th_db),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid("radio", format!("{name} must be finite (got {v})")));
        }
        if self.bandwidth_hz <= 0.0 {
            return Err(Error::invalid("radio", format!("bandwidth_hz must be positive (got {})", self.bandwidth_hz)));
        }
        Ok(())
    }

    pub fn noise_power_dbm(&self) -> f64 {
        self.noise_psd_dbm_hz + 10.0 * self.bandwidth_hz.log10()
    }

    /// Linear transmit SNR `γ0 = P / N0`.
    pub fn transmit_snr(&self) -> f64 {
        10f64.powf((self.tx_power_dbm - self.noise_power_dbm()) / 10.0)
    }

    /// Linear outage threshold.
    pub fn gamma_th(&self) -> f64 {
        10f64.powf(self.gamma_th_db / 10.0)
    }
}

/// Linear transmit SNR of a radio configuration.
pub fn transmit_snr(radio: &RadioConfig) -> f64 {
    radio.transmit_snr()
}

/// Everything needed to describe one operating point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub geometry: LinkGeometry,
    pub fading: FadingConfig,
    pub radio: RadioConfig,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.fading.validate()?;
        self.radio.validate()
    }

    pub fn gamma0(&self) -> f64 {
        self.radio.transmit_snr()
    }

    /// Same operating point with the two surface hops exchanged.
    pub fn with_hops_swapped(&self) -> Self {
        Self {
            geometry: self.geometry.with_hops_swapped(),
            fading: self.fading.with_hops_swapped(),
            radio: self.radio.clone(),
        }
    }
}

/// One draw of the cascaded vectors and the direct coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h1: Vec<Complex64>,
    pub h2: Vec<Complex64>,
    pub g: Complex64,
}

impl ChannelRealization {
    pub fn zeros(n_elements: usize) -> Self {
        Self {
            h1: vec![Complex64::new(0.0, 0.0); n_elements],
            h2: vec![Complex64::new(0.0, 0.0); n_elements],
            g: Complex64::new(0.0, 0.0),
        }
    }

    pub fn n_elements(&self) -> usize {
        self.h1.len()
    }
}

/// Deterministic random stream for chunk `index` of a run seeded with `seed`.
///
/// Streams for different indices are independent ChaCha streams of the same
/// key, so a chunk draws the same numbers whichever worker executes it.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Precomputed per-element LOS terms and scattering scales.
///
/// A surface coefficient is drawn as `e^{jφ_n} (a + s w)` with `w` circular
/// complex Gaussian, so changing the LOS phase `φ_n` rotates the whole draw
/// and leaves its envelope untouched for the same random stream.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    hop1: SurfaceHop,
    hop2: SurfaceHop,
    // per-component standard deviation of g
    direct: f64,
}

#[derive(Debug, Clone)]
struct SurfaceHop {
    phasors: Vec<Complex64>,
    los: f64,
    // per-component standard deviation of the scattered part
    scatter: f64,
}

impl SurfaceHop {
    fn new(k: f64, loss: f64, phases: &[f64], n: usize) -> Self {
        let amp = loss.sqrt().recip();
        Self {
            phasors: (0..n)
                .map(|i| Complex64::from_polar(1.0, phases.get(i).copied().unwrap_or(0.0)))
                .collect(),
            los: amp * (k / (k + 1.0)).sqrt(),
            scatter: amp * (1.0 / (k + 1.0)).sqrt() * FRAC_1_SQRT_2,
        }
    }

    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [Complex64]) {
        for (h, phasor) in out.iter_mut().zip(&self.phasors) {
            *h = phasor * (self.los + complex_normal(rng, self.scatter));
        }
    }
}

impl ChannelSampler {
    pub fn new(geometry: &LinkGeometry, fading: &FadingConfig) -> Result<Self> {
        geometry.validate()?;
        fading.validate()?;
        let n = fading.n_elements;
        Ok(Self {
            hop1: SurfaceHop::new(fading.k1, geometry.path_loss(Hop::ToSurface), &fading.los_phases.h1, n),
            hop2: SurfaceHop::new(fading.k2, geometry.path_loss(Hop::FromSurface), &fading.los_phases.h2, n),
            direct: (fading.rayleigh_convention.direct_power() / 2.0 / geometry.path_loss(Hop::Direct)).sqrt(),
        })
    }

    pub fn n_elements(&self) -> usize {
        self.hop1.phasors.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelRealization {
        let mut out = ChannelRealization::zeros(self.n_elements());
        self.sample_into(rng, &mut out);
        out
    }

    /// Overwrites `out` with a fresh draw. Draw order is h1, h2, then g.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut ChannelRealization) {
        let n = self.n_elements();
        out.h1.resize(n, Complex64::new(0.0, 0.0));
        out.h2.resize(n, Complex64::new(0.0, 0.0));
        self.hop1.fill(rng, &mut out.h1);
        self.hop2.fill(rng, &mut out.h2);
        out.g = complex_normal(rng, self.direct);
    }

    /// Draws until no surface coefficient is exactly zero.
    pub fn sample_nondegenerate<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelRealization {
        loop {
            let r = self.sample(rng);
            let zero = Complex64::new(0.0, 0.0);
            if r.h1.iter().chain(&r.h2).all(|h| *h != zero) {
                return r;
            }
        }
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, std: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(std * re, std * im)
}

/// Draw one realization from a seeded stream.
pub fn sample_realization<R: Rng + ?Sized>(
    geometry: &LinkGeometry,
    fading: &FadingConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    Ok(ChannelSampler::new(geometry, fading)?.sample(rng))
}

/// Mean envelopes `E|h1,n|`, `E|h2,n|`, `E|g|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeMeans {
    pub h1: f64,
    pub h2: f64,
    pub g: f64,
}

pub fn envelope_means(geometry: &LinkGeometry, fading: &FadingConfig) -> EnvelopeMeans {
    EnvelopeMeans {
        h1: rician_mean(fading.k1, geometry.path_loss(Hop::ToSurface)),
        h2: rician_mean(fading.k2, geometry.path_loss(Hop::FromSurface)),
        g: (fading.rayleigh_convention.direct_power() * PI / (4.0 * geometry.path_loss(Hop::Direct))).sqrt(),
    }
}

/// `√(π / (4 L (K+1))) · L_{1/2}(-K)` for path loss `L`.
pub(crate) fn rician_mean(k: f64, loss: f64) -> f64 {
    (PI / (4.0 * loss * (k + 1.0))).sqrt() * laguerre(k)
}

/// `L_{1/2}(-K)` for a validated, non-negative `K`.
pub(crate) fn laguerre(k: f64) -> f64 {
    specfun::laguerre_half(-k).expect("Rician factor validated as finite and non-negative")
}
