//! Link-level performance laboratory for IRS-aided single-antenna links.
//!
//! The transmitter reaches the receiver over a Rayleigh-faded direct path
//! and over `N` Rician-faded cascaded paths through a passive reflecting
//! surface whose phases are aligned with the direct path. The crate offers
//!
//! - [`specfun`]: the special functions the closed forms need,
//! - [`channel`]: geometry/fading configuration and seeded channel draws,
//! - [`link`]: phase alignment, instantaneous SNR and Monte Carlo estimators,
//! - [`analytic`]: capacity bound, CLT outage and high-SNR outage laws,
//! - [`harness`]: config files, parameter sweeps, CSV output and self tests.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod harness;
pub mod link;
pub mod specfun;
pub mod stats;

pub use channel::{
    ChannelRealization, ChannelSampler, FadingConfig, LinkGeometry, RadioConfig, RayleighConvention, Scenario,
};
pub use error::{Error, Result};
pub use link::{Estimate, MonteCarlo, OutageEstimate};
