use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ier::app::{self, Overrides, Sinks};
use ier::config::Mode;

/// Density-matrix experiments with individual error reduction.
#[derive(Debug, Parser)]
#[command(name = "ier", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when neither this nor the config sets one.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Upper bound on parallel simulation runs.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Optimizer seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Allow registers above 8 qubits.
    #[arg(long, global = true)]
    large: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Optimize the ansatz parameters.
    Vqe,
    /// One corrected expectation value.
    Mitigate,
    /// Corrected and uncorrected errors over a rate grid.
    Sweep,
    /// Errors over a halving ladder of gate intervals.
    TauScaling,
    /// Integrator and compiler self-checks.
    Validate,
}

impl Command {
    fn mode(self) -> Mode {
        match self {
            Command::Vqe => Mode::Vqe,
            Command::Mitigate => Mode::Mitigate,
            Command::Sweep => Mode::Sweep,
            Command::TauScaling => Mode::TauScaling,
            Command::Validate => Mode::Validate,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = Overrides { output: cli.output, workers: cli.workers, seed: cli.seed, large: cli.large };
    let mode = cli.command.mode();
    let result = match &cli.config {
        Some(path) => app::load(path, mode, &ov).and_then(|cfg| {
            let (mut out, mut log) = (std::io::stdout().lock(), std::io::stderr());
            app::run(mode, &cfg, &ov, &mut Sinks { out: &mut out, log: &mut log })
        }),
        None => Err(ier::IerError::Config("--config <path> is required".into())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ier: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
