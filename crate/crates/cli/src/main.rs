#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Status;
use crate::config::RunConfig;
use crate::error::CliError;

/// Coupled Riemann solver for two scalar conservation laws joined at x = 0.
///
/// Exit codes: 0 on a result, 1 when nothing was found, 2 on bad input.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Double-wave candidates with u.csv, h.csv and candidates.json.
    Solve(Args),
    /// Viscous self-similar solutions over an ε list: u_eps_*.csv and report.json.
    Viscous(Args),
    /// Inner layer from uL = U(−∞) to uR = U(+∞): layer.csv and verdict.json.
    Layer(Args),
    /// Solution-type map of the quadratic pair: regions.json and regions.csv.
    Classify(Args),
}

#[derive(Debug, clap::Args)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Grid size (CSV samples, viscous nodes, layer steps or map resolution).
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated viscosities, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Scan samples for the double-wave search.
    #[arg(long)]
    scan: Option<usize>,
}

impl Args {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.grid = self.grid.or(cfg.grid);
        cfg.scan = self.scan.or(cfg.scan);
        if self.eps.is_some() {
            cfg.eps.clone_from(&self.eps);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("COUPLED_RIEMANN_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("COUPLED_RIEMANN_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

type Handler = fn(&RunConfig, &std::path::Path) -> Result<Status, CliError>;

fn run(cli: Cli) -> Result<Status, CliError> {
    let (args, cmd): (&Args, Handler) = match &cli.command {
        Command::Solve(a) => (a, commands::solve),
        Command::Viscous(a) => (a, commands::viscous),
        Command::Layer(a) => (a, commands::layer),
        Command::Classify(a) => (a, commands::classify),
    };
    let cfg = args.config()?;
    let threads = thread_cap()?;
    std::fs::create_dir_all(&args.out)?;
    coupled_riemann::par::with_thread_cap(threads, || cmd(&cfg, &args.out))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Found) => ExitCode::SUCCESS,
        Ok(Status::Empty) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
