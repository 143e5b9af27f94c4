mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::io::{CmdError, Exit};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error (bad flags or flag combinations)
  3  data error (malformed or unusable input files)
  4  numerical error (degenerate residuals, singular design)";

/// Residual-entropy loss experiments: Monte Carlo overfitting sweeps,
/// entropy-loss fits and loss evaluation.
#[derive(Debug, Parser)]
#[command(name = "resent", version, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo sweep of least-squares fits to white noise.
    Simulate(commands::simulate::SimulateArgs),
    /// Fit a basis model by least squares and then by the entropy loss.
    Fit(commands::fit::FitArgs),
    /// Evaluate MSE, MLP and the entropy loss of a residual column.
    LossEval(commands::loss_eval::LossEvalArgs),
    /// 1-D slice of the loss surface along one coefficient.
    Landscape(commands::landscape::LandscapeArgs),
    /// Fit a smooth signal with gross outliers under several eta values.
    OutlierDemo(commands::outlier::OutlierArgs),
}

/// Output directory shared by the file-producing subcommands.
#[derive(Debug, Clone, Args)]
pub struct OutDir {
    /// Directory for output files (created if missing).
    #[arg(long, env = "RESENT_OUT", default_value = ".")]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Fit(a) => commands::fit::run(a),
        Command::LossEval(a) => commands::loss_eval::run(a),
        Command::Landscape(a) => commands::landscape::run(a),
        Command::OutlierDemo(a) => commands::outlier::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError { kind, source }) => {
            eprintln!("error: {source:#}");
            ExitCode::from(match kind {
                Exit::Usage => 2,
                Exit::Data => 3,
                Exit::Numerical => 4,
            })
        }
    }
}
