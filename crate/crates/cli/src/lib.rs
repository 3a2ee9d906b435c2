//! Command-line front end for the `regulation_game` solver.
//!
//! Subcommands: `solve`, `sweep`, `bargain`, `probe`, `oracle-check`,
//! `pareto` and `heatmap`. Exit codes are 0 on success, 1 when a check
//! fails, 2 for usage or configuration errors and 3 for I/O errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod heatmap;
pub mod records;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Output;
use config::RunConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "reggame",
    version,
    about = "Equilibria and regulation sweeps for the two-player safety-regulation game"
)]
pub struct Cli {
    /// JSON run configuration; defaults to the canonical game.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (overrides the config; 0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one regulated game and print the equilibrium as JSON.
    Solve {
        #[arg(long = "theta-g")]
        theta_g: Option<f64>,
        #[arg(long = "theta-d")]
        theta_d: Option<f64>,
    },
    /// Solve every grid cell at every configured share and write CSV.
    Sweep {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick the revenue share under a bargaining criterion.
    Bargain {
        #[arg(long)]
        criterion: Option<String>,
        #[arg(long = "theta-g")]
        theta_g: Option<f64>,
        #[arg(long = "theta-d")]
        theta_d: Option<f64>,
        /// Also bargain every grid cell and write the records here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Backfiring (1) or mutualism (2) probe on the configured game or on
    /// seeded random games.
    Probe {
        #[arg(long)]
        theorem: u8,
        /// Offset as a fraction of the unregulated final safety.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the analytic solver with grid search.
    OracleCheck {
        #[arg(long = "theta-g")]
        theta_g: Option<f64>,
        #[arg(long = "theta-d")]
        theta_d: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pareto hull vertices per regulatory regime from a sweep CSV.
    Pareto {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG heatmap of a sweep CSV.
    Heatmap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        metric: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command inside a pool of the requested size.
pub fn run(cli: Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let threads = cli.threads.unwrap_or(cfg.threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli.command, &cfg))
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    match command {
        Command::Solve { theta_g, theta_d } => commands::solve(cfg, theta_g, theta_d),
        Command::Sweep { out } => commands::sweep(cfg, out),
        Command::Bargain {
            criterion,
            theta_g,
            theta_d,
            out,
        } => commands::bargain_cmd(cfg, criterion.as_deref(), theta_g, theta_d, out),
        Command::Probe {
            theorem,
            epsilon,
            trials,
            seed,
        } => commands::probe(cfg, theorem, epsilon, trials, seed),
        Command::OracleCheck {
            theta_g,
            theta_d,
            trials,
            seed,
        } => commands::oracle_check(cfg, theta_g, theta_d, trials, seed),
        Command::Pareto { input, out } => commands::pareto(&input, out, cfg),
        Command::Heatmap { input, metric, out } => commands::heatmap(&input, &metric, out, cfg),
    }
}
