use std::path::PathBuf;

use clap::Args;
use resent_core::basis::LeastSquares;
use resent_core::{loss_landscape, Family};

use super::{load_xy, LossArgs};
use crate::io::{fmt_f64, CmdError, CmdResult, CsvText, OutputSet};
use crate::OutDir;

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    /// CSV with columns x and y.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub order: usize,
    /// Index of the coefficient to sweep.
    #[arg(long, default_value_t = 0)]
    pub axis: usize,
    /// Lower end of the sweep (default: least-squares value minus --span).
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    /// Upper end of the sweep (default: least-squares value plus --span).
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub span: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub loss: LossArgs,
    #[command(flatten)]
    pub out: OutDir,
}

pub fn run(args: LandscapeArgs) -> CmdResult {
    let spec = args.loss.spec()?;
    let (grid, y) = load_xy(&args.data, args.family)?;
    let (lo, hi) = match (args.lo, args.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let (model, _) = LeastSquares::new(&grid, args.family, args.order)?.solve(&y)?;
            let centre = *model.coefficients().get(args.axis).ok_or_else(|| {
                CmdError::usage(anyhow::anyhow!(
                    "--axis {} out of range for {} coefficients",
                    args.axis,
                    model.coefficients().len()
                ))
            })?;
            (
                lo.unwrap_or(centre - args.span),
                hi.unwrap_or(centre + args.span),
            )
        }
    };
    let rows = loss_landscape(
        &grid,
        &y,
        args.family,
        args.order,
        &spec,
        args.axis,
        (lo, hi),
        args.steps,
    )?;
    let mut csv = CsvText::new(["value", "mse", "mlp", "total"]);
    for r in &rows {
        csv.row([r.value, r.mse, r.mlp, r.total].map(fmt_f64));
    }
    let mut out = OutputSet::default();
    out.add("landscape.csv", csv.into_bytes());
    out.commit(&args.out.out)?;
    Ok(())
}
