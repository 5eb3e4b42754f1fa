mod commands;
mod dist;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dirbreak_core::MetricKind;

use crate::dist::DistSpec;
use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Mean,
    Breakdown,
    Bounds,
    Symmetrize,
    Fsbp,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Mean => "mean",
            Command::Breakdown => "breakdown",
            Command::Bounds => "bounds",
            Command::Symmetrize => "symmetrize",
            Command::Fsbp => "fsbp",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Tv,
    Kuiper,
}

#[derive(Debug, Parser)]
#[command(
    name = "dirbreak",
    version,
    about = "Breakdown points of directional mean functionals"
)]
struct Cli {
    #[command(subcommand)]
    command: RunArgs,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// CSV file: one angle per row, or x,y,z per row.
    #[arg(long, value_name = "FILE", conflicts_with = "dist")]
    pub input: Option<PathBuf>,
    /// Parametric law: vm:mu=M,kappa=K | uniform[:sphere] | pointmass:theta=T | pointmass:x=,y=,z=
    #[arg(long, value_name = "SPEC")]
    pub dist: Option<String>,
    /// Replace the --dist law by N seeded draws from it.
    #[arg(long, value_name = "N", requires = "dist")]
    pub sample: Option<usize>,
    #[arg(long, value_enum, default_value = "tv")]
    metric: MetricArg,
    /// Order of the cyclic symmetry group.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Angles in input and output are degrees.
    #[arg(long)]
    pub degrees: bool,
    /// RNG seed (hexadecimal).
    #[arg(long, value_name = "HEX", default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,
    /// Output format; json by default, csv for sweep.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Concentrations for sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5,10")]
    pub kappas: Vec<f64>,
    /// Contamination fraction grid size for breakdown.
    #[arg(long, default_value_t = 2000)]
    pub eps_steps: u32,
    /// Number of contamination locations for breakdown.
    #[arg(long, default_value_t = 720)]
    pub locations: u32,
}

#[derive(Debug, Subcommand)]
enum RunArgs {
    /// Mean direction, resultant length and definability.
    Mean(Args),
    /// Bias breakdown search plus definability bounds.
    Breakdown(Args),
    /// Definability upper bounds only.
    Bounds(Args),
    /// Components of the group symmetrization and its residual average.
    Symmetrize(Args),
    /// Finite-sample breakdown of the empirical circular mean.
    Fsbp(Args),
    /// Flip threshold and bounds over a grid of von Mises concentrations.
    Sweep(Args),
}

impl Args {
    pub fn metric(&self) -> MetricKind {
        match self.metric {
            MetricArg::Tv => MetricKind::TotalVariation,
            MetricArg::Kuiper => MetricKind::Kuiper,
        }
    }

    pub fn dist_spec(&self) -> Result<Option<DistSpec>, CliError> {
        self.dist.as_deref().map(str::parse).transpose()
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("invalid hex seed {s:?}: {e}"))
}

fn main() -> ExitCode {
    let (command, args) = match Cli::parse().command {
        RunArgs::Mean(a) => (Command::Mean, a),
        RunArgs::Breakdown(a) => (Command::Breakdown, a),
        RunArgs::Bounds(a) => (Command::Bounds, a),
        RunArgs::Symmetrize(a) => (Command::Symmetrize, a),
        RunArgs::Fsbp(a) => (Command::Fsbp, a),
        RunArgs::Sweep(a) => (Command::Sweep, a),
    };
    match commands::run(command, &args) {
        Ok(report) => {
            let format = args.format.unwrap_or(match command {
                Command::Sweep => Format::Csv,
                _ => Format::Json,
            });
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(format).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dirbreak {}: {e}", command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
