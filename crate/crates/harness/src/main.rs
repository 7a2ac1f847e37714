use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use mfc_harness::{
    compute_metrics, read_config, read_log_csv, run_closed_loop, write_log_csv, ExperimentConfig, Tolerances,
};

#[derive(Parser)]
#[command(name = "mfc", version, about = "Model-free control experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a closed-loop experiment from a JSON config.
    Run {
        config: PathBuf,
        /// CSV log destination; a `.meta.json` sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Feed the controller the exact F (synthetic plant only).
        #[arg(long)]
        oracle_f: bool,
        /// Drop measurement noise.
        #[arg(long)]
        no_noise: bool,
        /// Transient cutoff for the printed summary, in seconds.
        #[arg(long, default_value_t = 20.0)]
        cutoff: f64,
    },
    /// Print the built-in inverted-pendulum configuration as JSON.
    DemoPaper {
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a CSV log.
    Metrics {
        log: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        cutoff: f64,
        #[arg(long, default_value_t = 1e-6)]
        observer_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        ulm_tol: f64,
    },
}

/// Writes to stdout; a closed pipe (`mfc demo-paper | head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

const EXIT_ERROR: u8 = 1;
const EXIT_DIVERGED: u8 = 2;

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            oracle_f,
            no_noise,
            cutoff,
        } => {
            let mut cfg = read_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if oracle_f {
                cfg.oracle_f = true;
            }
            if no_noise {
                cfg.noise = None;
            }
            let log = run_closed_loop(&cfg)?;
            for w in &log.meta.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = &out {
                write_log_csv(&log, path)?;
                let meta = path.with_extension("meta.json");
                let text = serde_json::to_string_pretty(&log.meta)?;
                std::fs::write(&meta, text + "\n").with_context(|| format!("writing {}", meta.display()))?;
            }
            if let Some(k) = log.diverged_at {
                eprintln!("diverged at step {k}");
                return Ok(EXIT_DIVERGED);
            }
            if !log.records.is_empty() {
                let last = log.records.last().map_or(0.0, |r| r.t);
                let summary = compute_metrics(&log.records, cutoff.min(last), &Tolerances::default())?;
                emit(&serde_json::to_string_pretty(&summary)?)?;
            }
            Ok(0)
        }
        Command::DemoPaper { out } => {
            let cfg = ExperimentConfig::pendulum_default();
            match out {
                Some(path) => mfc_harness::write_config(&cfg, &path)?,
                None => emit(&cfg.to_json())?,
            }
            Ok(0)
        }
        Command::Metrics {
            log,
            cutoff,
            observer_tol,
            ulm_tol,
        } => {
            let records = read_log_csv(&log)?;
            let tol = Tolerances {
                observer: observer_tol,
                ulm: ulm_tol,
            };
            let summary = compute_metrics(&records, cutoff, &tol)?;
            emit(&serde_json::to_string_pretty(&summary)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
