//! Configuration files, parameter sweeps, CSV output and the pieces behind
//! the `linklab` command line.

mod config;
mod csv;
pub mod selftest;

use std::fmt;

pub use config::{load_config, parse_config, ExperimentConfig, KEYS};
pub use csv::{plot_script, render_csv, write_csv, write_plot_script};

use crate::analytic;
use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::link::MonteCarlo;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    N,
    K,
    D1Split,
    TxPower,
}

impl SweepVariable {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "N" | "n" => Some(Self::N),
            "K" | "k" => Some(Self::K),
            "d1_split" => Some(Self::D1Split),
            "tx_power" => Some(Self::TxPower),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::N => "N",
            Self::K => "K",
            Self::D1Split => "d1_split",
            Self::TxPower => "tx_power",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantities a sweep can report. The declaration order is the column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    McCapacity,
    CapBound,
    McOutage,
    OutageClt,
    OutageHighSnr,
}

impl Output {
    pub const ALL: [Output; 5] = [
        Output::McCapacity,
        Output::CapBound,
        Output::McOutage,
        Output::OutageClt,
        Output::OutageHighSnr,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.as_str() == s)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Output::McCapacity => "mc_capacity",
            Output::CapBound => "cap_bound",
            Output::McOutage => "mc_outage",
            Output::OutageClt => "outage_clt",
            Output::OutageHighSnr => "outage_high_snr",
        }
    }

    pub fn is_probability(self) -> bool {
        matches!(self, Output::McOutage | Output::OutageClt | Output::OutageHighSnr)
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// Sorted and free of duplicates.
    pub outputs: Vec<Output>,
    pub n_samples: u64,
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            variable: SweepVariable::N,
            values: vec![8.0, 16.0, 32.0, 64.0],
            outputs: vec![Output::McCapacity, Output::CapBound],
            n_samples: 100_000,
            seed: 42,
        }
    }
}

impl SweepSpec {
    /// Checks the sweep against the base scenario it will modify.
    pub fn validate(&self, base: &Scenario) -> std::result::Result<(), String> {
        if self.values.is_empty() {
            return Err("at least one value is required".into());
        }
        if let Some(w) = self.values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(format!("values must be strictly increasing ({} then {})", w[0], w[1]));
        }
        if self.outputs.is_empty() {
            return Err("no outputs requested".into());
        }
        if self.n_samples < crate::link::MIN_SAMPLES {
            return Err(format!("need at least {} samples", crate::link::MIN_SAMPLES));
        }
        let total = base.geometry.d1 + base.geometry.d2;
        for &v in &self.values {
            let ok = match self.variable {
                SweepVariable::N => v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64,
                SweepVariable::K => v >= 0.0,
                SweepVariable::D1Split => v > 0.0 && v < total,
                SweepVariable::TxPower => v.is_finite(),
            };
            if !ok {
                let rule = match self.variable {
                    SweepVariable::N => "a positive integer".to_string(),
                    SweepVariable::K => "non-negative".to_string(),
                    SweepVariable::D1Split => format!("strictly between 0 and d1 + d2 = {total}"),
                    SweepVariable::TxPower => "finite".to_string(),
                };
                return Err(format!("{} value {v} must be {rule}", self.variable));
            }
        }
        Ok(())
    }

    /// The base scenario with the sweep variable set to `value`.
    pub fn apply(&self, base: &Scenario, value: f64) -> Scenario {
        let mut s = base.clone();
        match self.variable {
            SweepVariable::N => s.fading.n_elements = value as usize,
            SweepVariable::K => {
                s.fading.k1 = value;
                s.fading.k2 = value;
            }
            SweepVariable::D1Split => {
                let total = base.geometry.d1 + base.geometry.d2;
                s.geometry.d1 = value;
                s.geometry.d2 = total - value;
            }
            SweepVariable::TxPower => s.radio.tx_power_dbm = value,
        }
        s
    }
}

/// One reported quantity. Analytic outputs have a zero half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub output: Output,
    pub value: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_value: f64,
    /// In the order of [`SweepSpec::outputs`].
    pub cells: Vec<Cell>,
}

impl ResultRow {
    pub fn get(&self, output: Output) -> Option<&Cell> {
        self.cells.iter().find(|c| c.output == output)
    }
}

/// Evaluates every sweep point in order. Each point reuses the same seed.
pub fn run_sweep(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<ResultRow>> {
    let spec = &cfg.sweep;
    spec.validate(&cfg.scenario)
        .map_err(|message| Error::config(None, Some("sweep.values"), message))?;
    let mut mc = MonteCarlo::new(spec.n_samples, spec.seed);
    mc.workers = workers;
    spec.values
        .iter()
        .map(|&v| {
            let scenario = spec.apply(&cfg.scenario, v);
            scenario.validate()?;
            let cells = spec
                .outputs
                .iter()
                .map(|&output| evaluate_output(&scenario, output, &mc))
                .collect::<Result<Vec<_>>>()?;
            log::info!("{} = {v}: done", spec.variable);
            Ok(ResultRow { sweep_value: v, cells })
        })
        .collect()
}

fn evaluate_output(s: &Scenario, output: Output, mc: &MonteCarlo) -> Result<Cell> {
    let (value, half_width) = match output {
        Output::McCapacity => {
            let e = mc.ergodic_capacity(s)?;
            (e.value, e.half_width_95)
        }
        Output::McOutage => {
            let e = mc.outage(s)?;
            if e.few_events() {
                log::warn!("only {} outage events; interval is unreliable", e.events);
            }
            (e.estimate.value, e.estimate.half_width_95)
        }
        Output::CapBound => (analytic::capacity_upper_bound(s), 0.0),
        Output::OutageClt => (analytic::outage_clt(s), 0.0),
        Output::OutageHighSnr => (analytic::outage_high_snr(s), 0.0),
    };
    if !value.is_finite() || (output.is_probability() && !(0.0..=1.0).contains(&value)) {
        return Err(Error::invalid("result", format!("{output} evaluated to {value}")));
    }
    Ok(Cell {
        output,
        value,
        half_width,
    })
}

/// Closed-form quantities at the configured operating point.
pub fn evaluate(scenario: &Scenario) -> Result<Vec<(&'static str, f64)>> {
    scenario.validate()?;
    let clt = analytic::clt_moments(scenario);
    let law = analytic::near_origin_coefficient(scenario);
    Ok(vec![
        ("gamma0_db", 10.0 * scenario.gamma0().log10()),
        ("mean_snr_db", 10.0 * analytic::mean_snr(scenario).log10()),
        ("effective_snr_gain", analytic::effective_snr_gain(scenario)),
        ("cap_bound", analytic::capacity_upper_bound(scenario)),
        ("clt_mu", clt.mu),
        ("clt_sigma2", clt.sigma2),
        ("outage_clt", analytic::outage_clt(scenario)),
        ("near_origin_coeff", law.a_coeff),
        ("diversity_order", law.diversity as f64),
        ("outage_high_snr", analytic::outage_high_snr(scenario)),
    ])
}
