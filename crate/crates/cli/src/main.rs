use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holonomy_cli::{cmd_expm, cmd_simulate, cmd_synth, cmd_verify, FlowMode, Outcome, SimulateOptions};

/// Synthesize skew-Hermitian generators with prescribed monodromy on a
/// subspace, verify them, and simulate the projector flow they induce.
#[derive(Parser)]
#[command(name = "holonomy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build H from a problem document and write the result document.
    Synth {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// One-based index of the doubled eigenvalue (overrides the document).
        #[arg(long)]
        pivot: Option<usize>,
    },
    /// Check the H field of a problem document.
    Verify {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the projector trajectory as CSV.
    Simulate(SimulateArgs),
    /// Compare the Taylor and spectral exponentials of the matrix M.
    Expm {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimulateArgs {
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    /// Conjugation by exp(tH) (default).
    #[arg(long, conflicts_with = "rk4")]
    exact: bool,
    /// Integrate dP/dt = [H, P] with classical RK4.
    #[arg(long)]
    rk4: bool,
    /// Snap RK4 samples back onto the Grassmannian.
    #[arg(long)]
    retraction: bool,
}

fn run(cli: Cli) -> Result<Outcome, holonomy_cli::CliError> {
    match cli.command {
        Command::Synth { input, output, pivot } => cmd_synth(&input, output.as_deref(), pivot),
        Command::Verify { input, output } => cmd_verify(&input, output.as_deref()),
        Command::Simulate(args) => {
            let opts = SimulateOptions {
                steps: args.steps,
                stride: args.stride,
                mode: if args.rk4 { FlowMode::Rk4 } else { FlowMode::Exact },
                retraction: args.retraction,
            };
            cmd_simulate(&args.input, args.output.as_deref(), opts).map(|(outcome, _)| outcome)
        }
        Command::Expm { input, output } => cmd_expm(&input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
