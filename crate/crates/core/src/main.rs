use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use linklab::harness::{self, selftest};
use linklab::Error;

#[derive(Parser)]
#[command(name = "linklab", version, about = "Surface-assisted link simulator and closed-form analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and write a CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override `samples` from the config.
        #[arg(long)]
        samples: Option<u64>,
        /// Override `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo threads. Results do not depend on this.
        #[arg(long, env = "LINKLAB_WORKERS")]
        workers: Option<usize>,
        /// Also write a gnuplot script for the CSV.
        #[arg(long)]
        plot_script: Option<PathBuf>,
    },
    /// Print the closed-form quantities at the configured operating point.
    Eval {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check the special functions against numerical references.
    Selftest,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run {
            config,
            out,
            samples,
            seed,
            workers,
            plot_script,
        } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(n) = samples {
                cfg.sweep.n_samples = n;
            }
            if let Some(s) = seed {
                cfg.sweep.seed = s;
            }
            if workers == Some(0) {
                return Err(Error::Config {
                    line: None,
                    key: Some("workers".into()),
                    message: "must be at least 1".into(),
                });
            }
            let rows = harness::run_sweep(&cfg, workers)?;
            harness::write_csv(&out, &cfg, &rows)?;
            if let Some(path) = plot_script {
                harness::write_plot_script(&path, &cfg, &out)?;
            }
            log::info!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Eval { config } => {
            let cfg = harness::load_config(&config)?;
            for (name, value) in harness::evaluate(&cfg.scenario)? {
                println!("{name:<20} {value:.6e}");
            }
        }
        Command::Selftest => {
            let checks = selftest::run();
            for c in &checks {
                println!("{c}");
            }
            if !checks.iter().all(selftest::Check::passed) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else if e.is_io() {
                ExitCode::from(3)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
