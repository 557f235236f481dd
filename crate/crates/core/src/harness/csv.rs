//! CSV rendering and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::{ExperimentConfig, ResultRow};
use crate::error::{Error, Result};

/// Renders the sweep as CSV text.
///
/// The leading `#` block repeats the resolved configuration in the input
/// file syntax, so a result file documents exactly how it was produced.
pub fn render_csv(cfg: &ExperimentConfig, rows: &[ResultRow]) -> String {
    let g = &cfg.scenario.geometry;
    let f = &cfg.scenario.fading;
    let r = &cfg.scenario.radio;
    let s = &cfg.sweep;
    let join = |items: Vec<String>| items.join(", ");

    let mut out = String::new();
    out.push_str(concat!("# linklab ", env!("CARGO_PKG_VERSION"), "\n"));
    let header: [(&str, String); 20] = [
        ("d1", g.d1.to_string()),
        ("d2", g.d2.to_string()),
        ("d3", g.d3.to_string()),
        ("alpha1", g.alpha1.to_string()),
        ("alpha2", g.alpha2.to_string()),
        ("alpha3", g.alpha3.to_string()),
        ("ref_loss_db", g.ref_loss_db.to_string()),
        ("k1", f.k1.to_string()),
        ("k2", f.k2.to_string()),
        ("n_elements", f.n_elements.to_string()),
        ("rayleigh_convention", f.rayleigh_convention.as_str().to_string()),
        ("tx_power_dbm", r.tx_power_dbm.to_string()),
        ("bandwidth_hz", r.bandwidth_hz.to_string()),
        ("noise_psd_dbm_hz", r.noise_psd_dbm_hz.to_string()),
        ("gamma_th_db", r.gamma_th_db.to_string()),
        ("sweep.variable", s.variable.to_string()),
        ("sweep.values", join(s.values.iter().map(f64::to_string).collect())),
        ("sweep.outputs", join(s.outputs.iter().map(|o| o.to_string()).collect())),
        ("samples", s.n_samples.to_string()),
        ("seed", s.seed.to_string()),
    ];
    for (key, value) in header {
        let _ = writeln!(out, "# {key} = {value}");
    }

    out.push_str("sweep_value");
    for o in &s.outputs {
        let _ = write!(out, ",{o},{o}_hw");
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{}", row.sweep_value);
        for c in &row.cells {
            let _ = write!(out, ",{:e},{:e}", c.value, c.half_width);
        }
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn write_csv(path: &Path, cfg: &ExperimentConfig, rows: &[ResultRow]) -> Result<()> {
    write_atomic(path, &render_csv(cfg, rows))
}

/// A gnuplot script that plots every output column of `csv_path` against
/// the sweep variable, with error bars for Monte Carlo columns.
pub fn plot_script(cfg: &ExperimentConfig, csv_path: &Path) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set datafile commentschars '#'");
    let _ = writeln!(out, "set key autotitle columnhead");
    let _ = writeln!(out, "set xlabel '{}'", cfg.sweep.variable);
    if cfg.sweep.outputs.iter().all(|o| o.is_probability()) {
        let _ = writeln!(out, "set logscale y");
    }
    let file = csv_path.display();
    let plots: Vec<String> = cfg
        .sweep
        .outputs
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let col = 2 + 2 * i;
            format!("'{file}' using 1:{col}:{} with yerrorlines title '{o}'", col + 1)
        })
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

pub fn write_plot_script(path: &Path, cfg: &ExperimentConfig, csv_path: &Path) -> Result<()> {
    write_atomic(path, &plot_script(cfg, csv_path))
}
