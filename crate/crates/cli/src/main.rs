mod commands;
mod config;
mod error;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Flags, RunConfig};
use crate::error::CliError;
use crate::verify::VerifyOptions;

/// Screened Kratzer spectrum and thermodynamics under magnetic and AB fields.
#[derive(Debug, Parser)]
#[command(name = "skp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energies of the requested states (CSV)
    Energy(Flags),
    /// A reference table next to its printed values (CSV)
    Table(Flags),
    /// Zero-temperature and ensemble quantities along one axis (CSV)
    Sweep(Flags),
    /// Partition function and thermodynamic quantities (CSV)
    Thermo(Flags),
    /// Run the oracle comparisons
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Grid points of the coarse finite-difference grid
    #[arg(long, default_value_t = 200_001)]
    fd_points: usize,
    /// Outer edge of the finite-difference grid
    #[arg(long, default_value_t = 2000.0)]
    fd_rmax: f64,
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    perturb: f64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SKP_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("SKP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (flags, cmd): (Flags, fn(&RunConfig, &mut commands::Out) -> Result<(), CliError>) = match cli.command {
        Command::Verify(v) => {
            return verify::cmd_verify(&VerifyOptions {
                fd_points: v.fd_points,
                fd_r_max: v.fd_rmax,
                perturb: v.perturb,
            })
        }
        Command::Energy(f) => (f, commands::cmd_energy),
        Command::Table(f) => (f, commands::cmd_table),
        Command::Sweep(f) => (f, commands::cmd_sweep),
        Command::Thermo(f) => (f, commands::cmd_thermo),
    };
    let cfg = RunConfig::resolve(flags)?;
    let mut out = commands::open_output(&cfg)?;
    cmd(&cfg, &mut out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
