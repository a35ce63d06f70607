//! `qdm`: discord-type correlation measures and phase-estimation experiments
//! from the command line.
//!
//! Exit codes: 0 ok, 1 check failure, 2 invalid state or input, 3 dimension or
//! spectrum error, 4 I/O error, 5 probe insensitive to the phase direction.

mod commands;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdm_core::{Preset, Subsystem, Suite};

/// Seed used when neither `--seed` nor `QDM_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "qdm",
    version,
    about = "Quantum discord measures and phase estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print LQU, interferometric power, entropic discord and friends as JSON.
    Measures(MeasuresArgs),
    /// Tabulate the measures of a preset over a grid of p.
    Sweep(SweepArgs),
    /// Simulate phase estimation with the optimal measurement.
    Estimate(EstimateArgs),
    /// Run the randomized invariant checks.
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct StateSource {
    /// Named probe: rho_q, rho_c, bell, maximally_mixed, cq_example.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub preset: Option<Preset>,
    /// Mixing parameter for rho_q and rho_c.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// JSON state file `{"dims":[da,db],"matrix":[[re,im],...]}`, row-major.
    #[arg(long)]
    pub state: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(alias = "A")]
    A,
    #[value(alias = "B")]
    B,
}

impl From<SideArg> for Subsystem {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::A => Subsystem::A,
            SideArg::B => Subsystem::B,
        }
    }
}

#[derive(Args, Debug)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Measured subsystem.
    #[arg(long, value_enum, default_value_t = SideArg::A)]
    pub side: SideArg,
    /// Comma-separated increasing eigenvalues of the local observables.
    #[arg(long, allow_hyphen_values = true)]
    pub spectrum: Option<String>,
    /// Skip the sphere-grid cross-check of the closed forms.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub preset: Preset,
    /// Comma-separated values of p; defaults to 101 points from 0 to 1.
    #[arg(long, conflicts_with = "points")]
    pub p_grid: Option<String>,
    /// Number of evenly spaced p from 0 to 1.
    #[arg(long)]
    pub points: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Generator direction on the encoded side: x, y, z, diag, or `nx,ny,nz`.
    #[arg(long, default_value = "z", allow_hyphen_values = true)]
    pub direction: String,
    /// Subsystem carrying the phase.
    #[arg(long, value_enum, default_value_t = SideArg::A)]
    pub side: SideArg,
    #[arg(long, default_value_t = 0.3)]
    pub theta: f64,
    /// Shots per batch.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = qdm_core::estimate::DEFAULT_BATCHES)]
    pub batches: usize,
    #[arg(long, env = "QDM_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Suites to run (repeatable): inequality-chain, oracle, local-unitary,
    /// monotonicity, symmetry, cq-zero. All when absent.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[arg(long, env = "QDM_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Multiplies every QFI; used to check that the suite catches a broken build.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub qfi_scale: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measures(a) => commands::measures(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Check(a) => commands::check(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qdm: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
