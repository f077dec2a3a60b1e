//! `vhunt`: vertex hunting, simulation sweeps and bound reports from the
//! command line.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain error.

pub mod commands;
pub mod io;
pub mod schema;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use vhunt_core::simbench::Preset;
use vhunt_core::{Algorithm, VhError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: u64,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Domain(#[from] VhError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }

    /// Message for stderr; domain errors lead with their stable name.
    pub fn report(&self) -> String {
        match self {
            CliError::Domain(e) => {
                let mut msg = format!("error: {}: {e}", e.name());
                if let Some(hint) = e.hint() {
                    msg.push_str(&format!("\nhint: {hint}"));
                }
                msg
            }
            other => format!("error: {other}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vhunt", version, about = "Estimate simplex vertices from noisy points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a vertex-hunting algorithm on a CSV of points.
    Hunt(HuntArgs),
    /// Run a simulation preset or a custom experiment spec.
    Simulate(SimulateArgs),
    /// Evaluate the classical and improved SPA error bounds.
    Bounds(BoundsArgs),
    /// Print the theoretical tuning constants.
    Tuning(TuningArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `--delta`: a positive number, `heuristic`, or `theory`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaArg {
    Value(f64),
    Heuristic,
    Theory,
}

impl FromStr for DeltaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "heuristic" => Ok(DeltaArg::Heuristic),
            "theory" | "theoretical" => Ok(DeltaArg::Theory),
            other => match other.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(DeltaArg::Value(v)),
                _ => Err(format!("expected a positive number, 'heuristic' or 'theory', got '{s}'")),
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct HuntArgs {
    /// spa, pspa, dspa or ppspa.
    #[arg(long, default_value = "ppspa")]
    pub algorithm: Algorithm,
    /// Number of vertices.
    #[arg(long)]
    pub k: usize,
    /// Minimum neighborhood size N for denoising.
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    /// Neighborhood radius: a number, `heuristic` or `theory`.
    #[arg(long, default_value = "heuristic")]
    pub delta: DeltaArg,
    /// Noise level, required by `--delta theory`.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// CSV of points, one per row.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Recorded in the output; the algorithms themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// exp1, exp2, exp3 or fig1.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
    pub preset: Option<Preset>,
    /// JSON experiment spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Repetitions per cell (overrides the spec).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: Option<u64>,
    /// Master seed (overrides the spec).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// CSV of vertices, one per row.
    #[arg(long)]
    pub vertices: PathBuf,
    /// Observed points.
    #[arg(long, requires = "noiseless")]
    pub points: Option<PathBuf>,
    /// Noiseless positions of the observed points, row for row.
    #[arg(long, requires = "points")]
    pub noiseless: Option<PathBuf>,
    /// Rows of the noiseless file within this distance of a vertex are pure nodes.
    #[arg(long, default_value_t = 0.0)]
    pub pure_tol: f64,
    /// Simulate this many points on the simplex instead of reading them.
    #[arg(long, conflicts_with = "points")]
    pub simulate_n: Option<usize>,
    /// Noise level of the simulated points.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Exact vertex copies per vertex in the simulated points.
    #[arg(long, default_value_t = 1)]
    pub pure_per_vertex: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Precondition constant of the improved bound.
    #[arg(long, default_value_t = vhunt_core::bounds::DEFAULT_C_STAR)]
    pub c_star: f64,
    /// Offsets `a` for the family `V + a * direction`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sweep_translate: Option<Vec<f64>>,
    /// Translation direction (defaults to the last coordinate axis).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub direction: Option<Vec<f64>>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuningArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub sigma: f64,
    /// Regime with a constant fraction of pure nodes (default `ln ln n / ln n`).
    #[arg(long, conflicts_with = "c0")]
    pub delta_n: Option<f64>,
    /// Regime with `n^{1-c0}` pure nodes per vertex.
    #[arg(long)]
    pub c0: Option<f64>,
    /// `s_{K-1}` of the centered vertex matrix, needed for `alpha_n`.
    #[arg(long, conflicts_with = "vertices")]
    pub centered_s_km1: Option<f64>,
    /// Vertices CSV to compute `s_{K-1}` of the centered vertex matrix from.
    #[arg(long)]
    pub vertices: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Hunt(a) => commands::hunt(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Tuning(a) => commands::tuning(&a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}
