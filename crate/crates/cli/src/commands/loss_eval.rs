use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use resent_core::{entropy_loss, ResidualSequence};
use serde::Serialize;

use super::LossArgs;
use crate::io::{read_single_column, CmdError, CmdResult};

#[derive(Debug, Args)]
pub struct LossEvalArgs {
    /// Single-column CSV of residuals (an optional header line is skipped).
    #[arg(long)]
    pub residuals: PathBuf,
    #[command(flatten)]
    pub loss: LossArgs,
}

#[derive(Serialize)]
struct Report {
    mse: f64,
    mlp: f64,
    total: f64,
    n: usize,
}

pub fn run(args: LossEvalArgs) -> CmdResult {
    let spec = args.loss.spec()?;
    let values = read_single_column(&args.residuals)?;
    if values.len() < 2 {
        return Err(CmdError::data(anyhow!(
            "{}: need at least 2 residuals, got {}",
            args.residuals.display(),
            values.len()
        )));
    }
    let n = values.len();
    let r = ResidualSequence::new(values)?;
    if r.is_zero() {
        return Err(CmdError::numerical(anyhow!(
            "{}: all residuals are zero; the spectrum is undefined",
            args.residuals.display()
        )));
    }
    let loss = entropy_loss(&r, &spec)?;
    let report = Report {
        mse: loss.mse,
        mlp: loss.mlp,
        total: loss.total,
        n,
    };
    println!(
        "{}",
        serde_json::to_string(&report).expect("report serializes")
    );
    Ok(())
}
