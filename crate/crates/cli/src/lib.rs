//! Command-line front-end for the `hadamard` crate.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 numeric,
//! convergence or I/O failure, 3 a check or bound that did not hold.

mod commands;
mod points;
mod svg;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use points::{parse_points, PointSet};
pub use svg::render_charts;

#[derive(Debug, Parser)]
#[command(name = "hadamard", version, about = "Means and contamination simulations on Hadamard spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a contamination experiment and write CSV (and optionally SVG) output.
    Simulate(SimulateArgs),
    /// Read a point list and print the requested means.
    Means(MeansArgs),
    /// Run the randomized geometry checks on a space.
    Check(CheckArgs),
    /// Compare the inductive mean against the heteroscedastic LLN bound.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Flat `key = value` config file; flags below take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub experiment: Option<String>,
    /// Base seed (also read from HADAMARD_SEED).
    #[arg(long, env = "HADAMARD_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Comma-separated estimator names.
    #[arg(long)]
    pub estimators: Option<String>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub trace_stride: Option<usize>,
    #[arg(long)]
    pub lp_budget_exponent: Option<f64>,
    #[arg(long, default_value = "results")]
    pub output_dir: PathBuf,
    /// Also write one SVG chart per metric.
    #[arg(long)]
    pub emit_svg: bool,
    /// Run replications on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct MeansArgs {
    /// Point list: a `space …` header line, then one point per line.
    pub file: PathBuf,
    #[arg(long, default_value = "inductive,hansen,resampled,lim-palfia")]
    pub estimators: String,
    /// Seed of the resampled mean (also read from HADAMARD_SEED).
    #[arg(long, env = "HADAMARD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Lim–Palfia budget as a multiple of the number of points.
    #[arg(long, default_value_t = 100)]
    pub lp_cycles: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// euclidean, spd, book or all.
    #[arg(long, default_value = "all")]
    pub space: String,
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, env = "HADAMARD_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value = "euclidean-hetero")]
    pub generator: String,
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    /// Comma-separated sample sizes.
    #[arg(long, default_value = "10,100,1000,10000")]
    pub grid: String,
    #[arg(long, env = "HADAMARD_SEED", default_value_t = 0)]
    pub seed: u64,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numeric(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<hadamard::Error> for CliError {
    fn from(e: hadamard::Error) -> Self {
        match e {
            hadamard::Error::Domain(_) | hadamard::Error::Capacity { .. } => CliError::Validation(e.to_string()),
            hadamard::Error::Numeric(_) | hadamard::Error::Convergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(format!("I/O: {e}"))
    }
}

/// Parses `argv` and runs the subcommand, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Means(a) => commands::means(&a),
        Command::Check(a) => commands::check(&a),
        Command::Bound(a) => commands::bound(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hadamard: {e}");
            e.exit_code()
        }
    }
}
