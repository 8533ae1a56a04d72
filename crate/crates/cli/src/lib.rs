//! `rbvar`: command-line front end for randomized benchmarking variance
//! studies, built on `rbvar-core`.
//!
//! Subcommands produce CSV and JSON artifacts; every artifact embeds the
//! resolved configuration and seed it was produced from.

pub mod commands;
pub mod config;
pub mod error;
pub mod noise;
pub mod output;

use clap::{Parser, Subcommand};

pub use config::{Overrides, RunConfig};
pub use error::{CliError, CliResult};
pub use output::Artifacts;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rbvar", version, about = "Randomized benchmarking variance toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact variance curves of sampled extremal channels against the qubit bound.
    VarianceScan,
    /// Number of sequences for a target precision and confidence.
    DesignK,
    /// Monte Carlo RB with optional exact columns.
    Simulate,
    /// Decay fit and windowed fidelity ratios from CSV data.
    Fit,
    /// Fidelity and diamond-distance bounds for a channel.
    Bounds,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VarianceScan => "variance-scan",
            Command::DesignK => "design-k",
            Command::Simulate => "simulate",
            Command::Fit => "fit",
            Command::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// JSON file with run parameters.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primary output file; the JSON summary goes next to it.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Channel as `name:key=value,...`, e.g. `amplitude-damping:g=0.99`.
    #[arg(long, global = true)]
    pub noise: Option<String>,
    /// Lengths: `10,20,30`, `start:end` or `start:end:step`.
    #[arg(long, global = true)]
    pub m: Option<String>,
    /// Sequences per length: an integer or `quadratic:c`.
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// Shots per sequence, or `off`.
    #[arg(long, global = true)]
    pub shots: Option<String>,
    /// Input CSV for `fit`.
    #[arg(long, global = true)]
    pub data: Option<std::path::PathBuf>,
    /// Any configuration key, as `key=value` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Flags {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            out: self.out.clone(),
            noise: self.noise.clone(),
            m: self.m.clone(),
            k: self.k.clone(),
            shots: self.shots.clone(),
            data: self.data.clone(),
            set: self.set.clone(),
        }
    }
}

/// Runs a subcommand on a resolved configuration.
pub fn run(command: Command, cfg: &RunConfig) -> CliResult<Artifacts> {
    match command {
        Command::VarianceScan => commands::cmd_variance_scan(cfg),
        Command::DesignK => commands::cmd_design_k(cfg),
        Command::Simulate => commands::cmd_simulate(cfg),
        Command::Fit => commands::cmd_fit(cfg),
        Command::Bounds => commands::cmd_bounds(cfg),
    }
}

/// Worker count from [`THREADS_ENV`]; `None` leaves the default.
pub fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
    }
}

/// Parses the arguments, runs the command and writes its artifacts.
pub fn main_with(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::resolve(cli.flags.config.as_deref(), &cli.flags.overrides())?;
    let work = || -> CliResult<()> {
        let artifacts = run(cli.command, &cfg)?;
        for w in &artifacts.warnings {
            eprintln!("warning: {w}");
        }
        output::emit(&artifacts, cfg.out.as_deref())
    };
    match threads_from_env()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}
