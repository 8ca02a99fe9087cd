//! Command-line front end: `classify`, `simulate`, `sweep`, `spectrum` and
//! `print-config`.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures. `HOLONOMY_LAB_THREADS` caps the worker pool used by `sweep`.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::HolonomyError;
use config::{OutputFormat, ScenarioConfig, SweepAxis};

pub const THREADS_ENV: &str = "HOLONOMY_LAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] HolonomyError),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "holonomy-lab", version, about = "Eigenspace anholonomy in two-level systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lift the director loop and report the eigenprojector permutation.
    Classify(CommonArgs),
    /// Evolve a state around the cycle and classify the outcome.
    Simulate(CommonArgs),
    /// Repeat a run over a list of values of one parameter.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        axis: Option<SweepAxis>,
    },
    /// Write the two levels (energies or quasienergies) along the cycle.
    Spectrum(CommonArgs),
    /// Print the effective configuration as JSON.
    PrintConfig(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Scenario file (JSON). Missing fields take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write the sampled director path (classify).
    #[arg(long)]
    pub emit_path: bool,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Seed for the path deformation.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut config = match &self.config {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        if self.emit_path {
            config.output.emit_path = true;
        }
        if let Some(dir) = &self.out {
            config.output.dir = dir.clone();
        }
        if let Some(f) = self.format {
            config.output.format = f;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        Ok(config)
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

/// Runs one invocation and returns the text for stdout.
pub fn run(cli: Cli) -> Result<String, CliError> {
    let (common, axis) = match &cli.command {
        Command::Classify(c) | Command::Simulate(c) | Command::Spectrum(c) | Command::PrintConfig(c) => (c, None),
        Command::Sweep { common, axis } => (common, *axis),
    };
    let mut config = common.resolve()?;
    if let Some(a) = axis {
        config.sweep.axis = a;
    }
    config.validate()?;
    if let Command::PrintConfig(_) = cli.command {
        return Ok(config.to_json_pretty() + "\n");
    }
    let threads = thread_cap()?;
    output::ensure_writable(&config.output.dir).map_err(|e| {
        CliError::Config(format!("output directory {} is not writable: {e}", config.output.dir.display()))
    })?;

    let hash = config.hash();
    let ctx = commands::Context { config, hash };
    match cli.command {
        Command::Classify(_) => commands::classify(&ctx),
        Command::Simulate(_) => commands::simulate(&ctx),
        Command::Sweep { .. } => commands::sweep(&ctx, threads),
        Command::Spectrum(_) => commands::spectrum(&ctx),
        Command::PrintConfig(_) => unreachable!(),
    }
}
