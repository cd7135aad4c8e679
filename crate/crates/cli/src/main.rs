//! `fusionframe`: fusion frame bounds, duals, iterative reconstruction and fusiograms.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fusionframe", version, about = "Finite-dimensional fusion frame toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Relative tolerance, optionally followed by an absolute one: `1e-10` or `1e-10,1e-12`.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write (and expect) a header line in CSV files.
    #[arg(long, global = true)]
    pub header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualMode {
    Canonical,
    Alternate,
    FromLeftInverse,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print optimal frame bounds, condition number and classification.
    Bounds { frame: PathBuf },
    /// Compute or verify a dual fusion frame; writes dual.json and certificate.json.
    Dual {
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = DualMode::Canonical)]
        mode: DualMode,
        /// CSV with one weight per component for the dual.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Existing dual to verify instead of constructing one.
        #[arg(long)]
        dual: Option<PathBuf>,
    },
    /// Run the time-frequency pipeline on a signal; writes grid.csv, mask.csv,
    /// image.pgm, norms.pgm, borders.json and report.json.
    Fusiogram { signal: PathBuf, config: PathBuf },
    /// Write the composite test signal (windowed noise, sinusoid, impulse) to signal.csv.
    Signal {
        #[arg(long, default_value_t = 384)]
        len: usize,
    },
    /// Run the frame algorithm and write trace.csv (n, error, bound).
    Iterate {
        frame: PathBuf,
        signal: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        /// Multiply the optimal upper bound by this factor (at least 1).
        #[arg(long, default_value_t = 1.0)]
        upper_scale: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds { frame } => commands::bounds(&cli.global, &frame),
        Command::Dual {
            frame,
            mode,
            weights,
            dual,
        } => commands::dual(&cli.global, &frame, mode, weights.as_deref(), dual.as_deref()),
        Command::Fusiogram { signal, config } => commands::fusiogram(&cli.global, &signal, &config),
        Command::Signal { len } => commands::signal(&cli.global, len),
        Command::Iterate {
            frame,
            signal,
            eps,
            max_iter,
            upper_scale,
        } => commands::iterate(&cli.global, &frame, &signal, eps, max_iter, upper_scale),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fusionframe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
