//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or certification failure, 2 input
//! error.

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{FileConfig, Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir reduction factors for real metallic mirrors from tabulated optical data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// NAME=FILE, NAME=builtin:au|cu, NAME=perfect or NAME=drude:WP,GAMMA (repeatable).
    #[arg(long = "material", global = true, value_name = "NAME=FILE")]
    materials: Vec<String>,
    /// Smallest plate separation (um).
    #[arg(long, global = true)]
    lmin: Option<f64>,
    /// Largest plate separation (um).
    #[arg(long, global = true)]
    lmax: Option<f64>,
    /// Number of separations.
    #[arg(long, global = true)]
    lpoints: Option<usize>,
    /// Sphere radius (cm) for the sphere-plane force.
    #[arg(long = "radius-cm", global = true)]
    radius_cm: Option<f64>,
    /// Target relative tolerance of the Lifshitz quadrature.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the low-frequency Drude extrapolation and print the parameters.
    Fit,
    /// Tabulate eps''(omega) and eps(i xi) for each material.
    Epsilon,
    /// Energy and pressure reduction factors over the distance grid.
    Eta,
    /// Sphere-plane force in the proximity-force approximation.
    Force,
    /// Run the oracle certification suite.
    Certify,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides {
        materials: cli.materials,
        lmin: cli.lmin,
        lmax: cli.lmax,
        lpoints: cli.lpoints,
        radius_cm: cli.radius_cm,
        tol: cli.tol,
        out: cli.out,
    };
    let cfg = RunConfig::resolve(file, overrides)?;
    match cli.command {
        Command::Fit => commands::fit(&cfg),
        Command::Epsilon => commands::epsilon(&cfg),
        Command::Eta => commands::eta(&cfg),
        Command::Force => commands::force(&cfg),
        Command::Certify => commands::certify(&cfg),
    }
}
