//! The `rtea` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 numerical failure,
//! 4 I/O error.

mod analyze;
mod bench;
pub mod config;
mod extract;
mod generate;
pub mod io;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::penalty::PenaltyFamily;
use config::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::Io { .. } | Error::Format { .. } => EXIT_IO,
        Error::InvalidParameter(_)
        | Error::InvalidInput(_)
        | Error::Unsupported(_)
        | Error::InvalidPeriod(_) => EXIT_ARGS,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rtea",
    version,
    about = "Repetitive transients extraction for vibration signals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a noisy two-train test record with ground truth.
    Generate(GenerateArgs),
    /// Split a record into two periodic transient components and residual.
    Extract(ExtractArgs),
    /// Envelope spectra and fault-rate peaks of extracted components.
    Analyze(AnalyzeArgs),
    /// Component error as a function of eta on synthetic records.
    BenchEta(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Period of train 1 in samples.
    #[arg(long, default_value_t = 32.0)]
    pub t1: f64,
    /// Period of train 2 in samples.
    #[arg(long, default_value_t = 53.0)]
    pub t2: f64,
    /// Record length in samples.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 0.5, conflicts_with = "snr_db")]
    pub sigma: f64,
    /// Set the noise level from a target SNR instead of `--sigma`.
    #[arg(long)]
    pub snr_db: Option<f64>,
    #[arg(long, env = "RTEA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Sample rate in Hz; with it, `--f1`/`--f2` give the trains as fault rates.
    #[arg(long)]
    pub fs: Option<f64>,
    #[arg(long, requires = "fs")]
    pub f1: Option<f64>,
    #[arg(long, requires = "fs")]
    pub f2: Option<f64>,
    /// Duration in seconds; overrides `--n` when `--fs` is given.
    #[arg(long, requires = "fs")]
    pub duration: Option<f64>,
    /// Onset jitter, percent of the period.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    /// Amplitude modulation rate of train 2 in Hz (needs `--fs`).
    #[arg(long, requires = "fs")]
    pub mod_hz: Option<f64>,
    /// Amplitude scale of train 2.
    #[arg(long, default_value_t = 1.0)]
    pub scale2: f64,
    /// Omit train 2.
    #[arg(long)]
    pub single: bool,
    /// Also write signal.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// TOML or JSON settings (a previous manifest.json also works); flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Signal column; a file with a single data column needs none.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Period of component 1 in samples.
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    /// Period for `--mode pogs`, in samples.
    #[arg(long, conflicts_with_all = ["t1", "t2"])]
    pub period: Option<f64>,
    /// Fault rate of component 1 in Hz.
    #[arg(long)]
    pub f1: Option<f64>,
    #[arg(long)]
    pub f2: Option<f64>,
    #[arg(long)]
    pub fs: Option<f64>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k0: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub a0_fraction: Option<f64>,
    #[arg(long)]
    pub penalty: Option<PenaltyFamily>,
    /// Noise level; MAD estimate when absent.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, env = "RTEA_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// components.csv from `extract`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub fs: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub nfft: Option<usize>,
    /// Moving-average width over spectrum bins (odd).
    #[arg(long)]
    pub smooth_bins: Option<usize>,
    #[arg(long, default_value_t = 5.0)]
    pub band_lo: f64,
    #[arg(long, default_value_t = 200.0)]
    pub band_hi: f64,
    #[arg(long, default_value_t = 4)]
    pub harmonics: usize,
    /// Harmonic match tolerance in Hz.
    #[arg(long, default_value_t = 1.5)]
    pub tol_hz: f64,
    /// Peak floor as a multiple of the median spectrum level.
    #[arg(long, default_value_t = 3.0)]
    pub floor: f64,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated eta values.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95"
    )]
    pub etas: Vec<f64>,
    /// Number of seeded records per eta.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// First seed.
    #[arg(long, env = "RTEA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Input SNR of every record.
    #[arg(long, default_value_t = 0.0)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 0.9)]
    pub a0_fraction: f64,
    #[arg(long, default_value = "atan")]
    pub penalty: PenaltyFamily,
    /// Estimate the noise level by MAD instead of using the generator's value.
    #[arg(long)]
    pub mad: bool,
    #[arg(long, default_value_t = crate::solver::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long)]
    pub svg: bool,
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ARGS } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Extract(a) => extract::run(&a),
        Command::Analyze(a) => analyze::run(&a),
        Command::BenchEta(a) => bench::run(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
