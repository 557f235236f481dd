//! Flat `key = value` configuration files.
//!
//! Blank lines and everything after `#` are ignored. Keys that are absent
//! take the reference defaults (150/150/200 m, exponents 2/2/3.5, −30 dB
//! reference loss, 180 kHz, −173 dBm/Hz, 10 dB threshold). `k` sets both
//! Rician factors; `k1`/`k2` override it per hop.

use std::collections::HashMap;
use std::path::Path;

use super::{Output, SweepSpec, SweepVariable};
use crate::channel::{RayleighConvention, Scenario};
use crate::error::{Error, Result};
use crate::link::MIN_SAMPLES;

pub const KEYS: &[&str] = &[
    "d1",
    "d2",
    "d3",
    "alpha1",
    "alpha2",
    "alpha3",
    "ref_loss_db",
    "k",
    "k1",
    "k2",
    "n_elements",
    "tx_power_dbm",
    "bandwidth_hz",
    "noise_psd_dbm_hz",
    "gamma_th_db",
    "rayleigh_convention",
    "sweep.variable",
    "sweep.values",
    "sweep.outputs",
    "samples",
    "seed",
];

/// A fully resolved experiment: one operating point plus the sweep over it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub sweep: SweepSpec,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text)
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config(Some(line), None, format!("expected `key = value`, found `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| Error::config(Some(line), Some(key), "unknown key"))?;
        if entries.insert(known, Entry { line, value }).is_some() {
            return Err(Error::config(Some(line), Some(key), "duplicate key"));
        }
    }

    let mut cfg = ExperimentConfig::default();
    let get = |key: &str| entries.get(key);

    {
        let geom = &mut cfg.scenario.geometry;
        for (key, slot) in [("d1", &mut geom.d1), ("d2", &mut geom.d2), ("d3", &mut geom.d3)] {
            if let Some(e) = get(key) {
                *slot = parse_real(key, e)?;
                check(*slot > 0.0, key, e, "must be positive")?;
            }
        }
        for (key, slot) in [
            ("alpha1", &mut geom.alpha1),
            ("alpha2", &mut geom.alpha2),
            ("alpha3", &mut geom.alpha3),
        ] {
            if let Some(e) = get(key) {
                *slot = parse_real(key, e)?;
                check((1.0..=6.0).contains(slot), key, e, "must lie in [1, 6]")?;
            }
        }
        if let Some(e) = get("ref_loss_db") {
            geom.ref_loss_db = parse_real("ref_loss_db", e)?;
            check(geom.ref_loss_db <= 0.0, "ref_loss_db", e, "must be <= 0 dB")?;
        }
    }

    {
        let fading = &mut cfg.scenario.fading;
        if let Some(e) = get("k") {
            let k = parse_real("k", e)?;
            check(k >= 0.0, "k", e, "must be non-negative")?;
            fading.k1 = k;
            fading.k2 = k;
        }
        for (key, slot) in [("k1", &mut fading.k1), ("k2", &mut fading.k2)] {
            if let Some(e) = get(key) {
                *slot = parse_real(key, e)?;
                check(*slot >= 0.0, key, e, "must be non-negative")?;
            }
        }
        if let Some(e) = get("n_elements") {
            let n = parse_uint("n_elements", e)?;
            check(n >= 1, "n_elements", e, "must be at least 1")?;
            fading.n_elements = n as usize;
        }
        if let Some(e) = get("rayleigh_convention") {
            fading.rayleigh_convention = match e.value.to_ascii_lowercase().as_str() {
                "unit_power" => RayleighConvention::UnitPower,
                "unit_component" => RayleighConvention::UnitComponent,
                other => {
                    return Err(Error::config(
                        Some(e.line),
                        Some("rayleigh_convention"),
                        format!("expected unit_power or unit_component, found `{other}`"),
                    ))
                }
            };
        }
    }

    {
        let radio = &mut cfg.scenario.radio;
        for (key, slot) in [
            ("tx_power_dbm", &mut radio.tx_power_dbm),
            ("noise_psd_dbm_hz", &mut radio.noise_psd_dbm_hz),
            ("gamma_th_db", &mut radio.gamma_th_db),
        ] {
            if let Some(e) = get(key) {
                *slot = parse_real(key, e)?;
            }
        }
        if let Some(e) = get("bandwidth_hz") {
            radio.bandwidth_hz = parse_real("bandwidth_hz", e)?;
            check(radio.bandwidth_hz > 0.0, "bandwidth_hz", e, "must be positive")?;
        }
    }

    let sweep = &mut cfg.sweep;
    if let Some(e) = get("samples") {
        sweep.n_samples = parse_uint("samples", e)?;
        check(
            sweep.n_samples >= MIN_SAMPLES,
            "samples",
            e,
            &format!("must be at least {MIN_SAMPLES}"),
        )?;
    }
    if let Some(e) = get("seed") {
        sweep.seed = parse_uint("seed", e)?;
    }
    if let Some(e) = get("sweep.variable") {
        sweep.variable = SweepVariable::parse(e.value).ok_or_else(|| {
            Error::config(
                Some(e.line),
                Some("sweep.variable"),
                format!("expected one of N, K, d1_split, tx_power; found `{}`", e.value),
            )
        })?;
    }
    if let Some(e) = get("sweep.outputs") {
        let mut outputs = Vec::new();
        for item in list_items(e.value) {
            let out = Output::parse(item).ok_or_else(|| {
                Error::config(Some(e.line), Some("sweep.outputs"), format!("unknown output `{item}`"))
            })?;
            outputs.push(out);
        }
        check(!outputs.is_empty(), "sweep.outputs", e, "must name at least one output")?;
        outputs.sort();
        outputs.dedup();
        sweep.outputs = outputs;
    }
    if let Some(e) = get("sweep.values") {
        sweep.values = list_items(e.value)
            .map(|item| {
                item.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::config(Some(e.line), Some("sweep.values"), format!("`{item}` is not a finite number")))
            })
            .collect::<Result<Vec<_>>>()?;
    }

    let line = get("sweep.values").map(|e| e.line);
    sweep
        .validate(&cfg.scenario)
        .map_err(|message| Error::config(line, Some("sweep.values"), message))?;
    cfg.scenario.validate()?;
    Ok(cfg)
}

fn list_items(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_real(key: &str, e: &Entry) -> Result<f64> {
    e.value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::config(Some(e.line), Some(key), format!("`{}` is not a finite number", e.value)))
}

fn parse_uint(key: &str, e: &Entry) -> Result<u64> {
    e.value
        .parse::<u64>()
        .map_err(|_| Error::config(Some(e.line), Some(key), format!("`{}` is not a non-negative integer", e.value)))
}

fn check(ok: bool, key: &str, e: &Entry, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(Some(e.line), Some(key), format!("{message} (got {})", e.value)))
    }
}
