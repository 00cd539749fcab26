//! `rsense` - batch computation front end: parameter scans and figure data
//! as machine-readable CSV/JSON.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, RunConfig};
use output::Table;

/// Exit code contract: 0 success, 2 invalid config, 3 numerical failure.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    fn numeric(e: rsense_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "rsense", version, about = "Dephasing-qubit sensing of a quasi-2D dipolar BEC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// run configuration (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker pool size (defaults to the number of cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// output path (overrides the config; stdout when absent everywhere)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// output format (overrides the config; default csv)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Roton/maxon features and band-edge weights per chi
    Features,
    /// Decoherence factor Gamma(t) curves
    Gamma,
    /// Quantum Fisher information curves with the long-time envelope
    Qfi,
    /// Envelope coefficients A, B, C and band-edge data per chi
    Envelope,
    /// Critical points chi* and chi** per P
    Critical,
    /// BLP non-Markovianity at doubling horizons
    Nonmarkov,
    /// Physical (SI) parameters to the dimensionless model point
    Convert,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::load(config_path).map_err(CliError::Config)?;
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = cli.format {
        cfg.format = Some(format);
    }

    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some_and(|j| j == 0) {
        return Err(CliError::Config("--jobs must be >= 1".into()));
    }

    let table = match cli.command {
        Command::Features => commands::features(&cfg)?,
        Command::Gamma => commands::gamma(&cfg)?,
        Command::Qfi => commands::qfi(&cfg)?,
        Command::Envelope => commands::envelope(&cfg)?,
        Command::Critical => commands::critical(&cfg)?,
        Command::Nonmarkov => commands::nonmarkov(&cfg)?,
        Command::Convert => commands::convert(&cfg)?,
    };

    write_table(&table, &cfg).map_err(|e| CliError::Config(format!("cannot write output: {e}")))
}

fn write_table(table: &Table, cfg: &RunConfig) -> std::io::Result<()> {
    let format = cfg.format.unwrap_or(Format::Csv);
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            let mut w = std::io::BufWriter::new(file);
            match format {
                Format::Csv => {
                    table.write_csv(&mut w)?;
                    table.write_sidecar(path)?;
                }
                Format::Json => table.write_json(&mut w)?,
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            match format {
                Format::Csv => table.write_csv(&mut w)?,
                Format::Json => table.write_json(&mut w)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
