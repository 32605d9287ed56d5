//! `halvekit` — characterization and modeling pipelines for zipping
//! electrohydraulic actuators, as reproducible batch commands.
//!
//! Exit codes: 0 success, 2 ingest error, 3 numerical failure,
//! 4 precondition violation.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use halvekit_core::actuator::ActuatorError;
use halvekit_core::dielectric::DielectricError;
use halvekit_core::io::IoError;
use halvekit_core::kinetics::KineticsError;
use halvekit_core::sysid::SysidError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Ingest(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Ingest(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Ingest(e.to_string())
    }
}

impl From<DielectricError> for CliError {
    fn from(e: DielectricError) -> Self {
        use DielectricError::*;
        match e {
            NoDischargeBranch | NonMonotoneBranch | ZeroField(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ActuatorError> for CliError {
    fn from(e: ActuatorError) -> Self {
        use ActuatorError::*;
        match e {
            Overfilled { .. } | ZeroPower => CliError::Numerical(e.to_string()),
            Dielectric(inner) => CliError::from(inner),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<KineticsError> for CliError {
    fn from(e: KineticsError) -> Self {
        use KineticsError::*;
        match e {
            NoMotionDetected { .. } | DidNotSettle { .. } | DegenerateWindow { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SysidError> for CliError {
    fn from(e: SysidError) -> Self {
        use SysidError::*;
        match e {
            InfeasibleBox => CliError::Numerical(e.to_string()),
            Actuator(inner) => CliError::from(inner),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "halvekit",
    version,
    about = "Characterization and modeling toolkit for zipping electrohydraulic actuators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an effective-permittivity spectrum from D-E loop CSVs.
    Permittivity(PermittivityArgs),
    /// Predict force/strain curves and actuator energy densities.
    Predict(PredictArgs),
    /// Extract kinetic metrics from a step-voltage displacement trace.
    Kinetics(KineticsArgs),
    /// Fit the analytical force/strain model to measurements.
    Fit(FitArgs),
}

#[derive(Args)]
pub struct PermittivityArgs {
    /// D-E loop CSVs (`E_V_per_m,D_C_per_m2`), one loop per file.
    #[arg(required = true)]
    pub de_files: Vec<PathBuf>,
    /// Drive frequency; overrides the JSON sidecars.
    #[arg(long = "frequency-hz")]
    pub frequency_hz: Option<f64>,
    /// Material label; overrides the JSON sidecars.
    #[arg(long)]
    pub material: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct PredictArgs {
    /// Geometry JSON file.
    #[arg(long)]
    pub geometry: PathBuf,
    /// Spectrum CSV (`E_V_per_m,eps_eff`).
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Drive voltages, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub voltages: Vec<f64>,
    /// Points per force/strain curve.
    #[arg(long = "n-points", default_value_t = 128)]
    pub n_points: usize,
    /// Smallest half-central angle of the sweep (rad).
    #[arg(long = "alpha-min", default_value_t = 1e-3)]
    pub alpha_min: f64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct KineticsArgs {
    /// Trace CSV (`time_s,contraction_m`).
    #[arg(long)]
    pub trace: PathBuf,
    /// Trace sidecar JSON; defaults to the trace path with a .json extension.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    /// Savitzky-Golay frame length (odd).
    #[arg(long, default_value_t = 17)]
    pub window: usize,
    /// Savitzky-Golay polynomial order.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Contraction magnitudes below this count as no motion (m).
    #[arg(long = "noise-floor", default_value_t = 1e-6)]
    pub noise_floor: f64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FitArgs {
    /// Measured force/strain CSV (`strain,force_N`).
    #[arg(long)]
    pub measurements: PathBuf,
    /// Measurement sidecar JSON; defaults to the measurement path with a
    /// .json extension.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    /// Parameter box JSON: a list of {name, min, max, initial}.
    #[arg(long = "box")]
    pub parameter_box: PathBuf,
    /// Optimizer seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent optimizer restarts.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Curve knot count.
    #[arg(long, default_value_t = 32)]
    pub knots: usize,
    /// Iteration cap per restart.
    #[arg(long = "max-iterations", default_value_t = 5000)]
    pub max_iterations: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn init_thread_pool() {
    if let Ok(threads) = std::env::var("HALVEKIT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid HALVEKIT_THREADS={threads:?}"),
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Permittivity(args) => commands::cmd_permittivity(args),
        Command::Predict(args) => commands::cmd_predict(args),
        Command::Kinetics(args) => commands::cmd_kinetics(args),
        Command::Fit(args) => commands::cmd_fit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
