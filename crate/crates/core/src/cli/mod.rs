//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 no result, 3 verification failure.

mod commands;
pub mod document;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::numeric::Side;
use crate::polymatrix::Strategy;
use crate::solver::Orientation;

#[derive(Debug, Parser)]
#[command(
    name = "matpoly",
    version,
    about = "Spectral solver for matrix polynomial equations"
)]
pub struct Cli {
    /// Worker threads for class and point evaluation (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an equation document and write a solution document.
    Solve(SolveArgs),
    /// Recompute residuals of a solution document against an equation.
    Verify(VerifyArgs),
    /// Print the determinantal polynomial of a univariate slice and its roots.
    Detpoly(DetpolyArgs),
    /// Sample zeros of the determinantal polynomial with attached null vectors.
    SampleVariety(SampleArgs),
    /// Generate a planted instance and its known solution.
    Plant(PlantArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Equation document.
    pub input: PathBuf,
    /// Solution document destination (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_rank: f64,
    #[arg(long, default_value_t = 200)]
    pub max_classes: usize,
    /// Variety points drawn per attempt (at least 2n are always drawn).
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Sampling seed; required for equations with two or more unknowns.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "random", value_parser = parse_strategy)]
    pub strategy: Strategy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Equation document.
    pub equation: PathBuf,
    /// Solution document.
    pub solutions: PathBuf,
    /// Largest accepted residual.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct DetpolyArgs {
    /// Equation document.
    pub input: PathBuf,
    /// Variable left free.
    #[arg(long, default_value_t = 0)]
    pub pivot: usize,
    /// Comma-separated values of the other variables in order, e.g. "1,0.5-2i".
    #[arg(long, allow_hyphen_values = true)]
    pub fix: Option<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Equation document.
    pub input: PathBuf,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Null-vector side (default: the side matching the orientation).
    #[arg(long, value_parser = parse_side)]
    pub side: Option<Side>,
    #[arg(long, default_value = "random", value_parser = parse_strategy)]
    pub strategy: Strategy,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlantArgs {
    #[arg(long)]
    pub dimension: usize,
    #[arg(long)]
    pub arity: usize,
    #[arg(long)]
    pub degree: u32,
    #[arg(long, value_parser = parse_orientation)]
    pub orientation: Orientation,
    #[arg(long)]
    pub seed: u64,
    /// Fixed eigenvalue lists, one per unknown, separated by ';', e.g. "1,2;3,4".
    #[arg(long, allow_hyphen_values = true)]
    pub eigenvalues: Option<String>,
    /// Equation document destination (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Solution document holding the planted unknowns.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    NoResult(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::NoResult(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NoResult(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoPointsFound
            | Error::TransformSingular { .. }
            | Error::InsufficientRoots { .. } => CliError::NoResult(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Detpoly(a) => commands::detpoly(a),
        Command::SampleVariety(a) => commands::sample_variety(a),
        Command::Plant(a) => commands::plant(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
