use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use resent_core::fit::Method;
use resent_core::{fit_entropy_loss, Family, FitResult, GridKind, LossBreakdown, SpectralAnalyzer};
use serde::Serialize;

use super::{load_xy, LossArgs, OptimizerArgs};
use crate::io::{fmt_f64, CmdResult, CsvText, OutputSet};
use crate::OutDir;

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with columns x and y; x must be strictly increasing.
    #[arg(long)]
    pub data: PathBuf,
    /// fourier or chebyshev.
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub order: usize,
    #[command(flatten)]
    pub loss: LossArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Serialize)]
struct Solution<'a> {
    coefficients: &'a [f64],
    loss: LossBreakdown,
}

impl<'a> From<&'a FitResult> for Solution<'a> {
    fn from(f: &'a FitResult) -> Self {
        Self {
            coefficients: f.model.coefficients(),
            loss: f.loss,
        }
    }
}

#[derive(Serialize)]
struct FitReport<'a> {
    family: Family,
    order: usize,
    n: usize,
    grid: GridKind,
    eta: f64,
    floor: f64,
    optimizer: Method,
    condition_estimate: f64,
    ols: Solution<'a>,
    optimized: Solution<'a>,
    max_coefficient_diff: f64,
    converged: bool,
    iterations: usize,
    evaluations: usize,
}

pub fn run(args: FitArgs) -> CmdResult {
    let spec = args.loss.spec()?;
    let opt = args.optimizer.config()?;
    if args.order == 0 {
        return Err(crate::io::CmdError::usage(anyhow!(
            "--order must be at least 1"
        )));
    }
    let (grid, y) = load_xy(&args.data, args.family)?;
    let result = fit_entropy_loss(&grid, &y, args.family, args.order, &spec, &opt)?;

    let max_coefficient_diff = result
        .ols
        .model
        .coefficients()
        .iter()
        .zip(result.fit.model.coefficients())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let report = FitReport {
        family: args.family,
        order: args.order,
        n: y.len(),
        grid: grid.kind(),
        eta: spec.eta(),
        floor: spec.floor().value(),
        optimizer: result.method,
        condition_estimate: result.ols.condition_estimate,
        ols: (&result.ols).into(),
        optimized: (&result.fit).into(),
        max_coefficient_diff,
        converged: result.converged,
        iterations: result.iterations,
        evaluations: result.evaluations,
    };

    let mut spectrum = CsvText::new(["lag", "rho_rr", "k", "rho_tilde_rr"]);
    let residuals = &result.fit.residuals;
    // A perfect fit has no spectrum; the file then carries only its header.
    if !residuals.is_zero() {
        let summary = SpectralAnalyzer::new(residuals.len())?.summarize(residuals, spec.floor())?;
        for (i, (rho, corr)) in summary.autocorr.iter().zip(&summary.corr_power).enumerate() {
            let i = i.to_string();
            spectrum.row([i.as_str(), &fmt_f64(*rho), &i, &fmt_f64(*corr)]);
        }
    }

    let mut out = OutputSet::default();
    out.add_json("fit.json", &report);
    out.add("residual_spectrum.csv", spectrum.into_bytes());
    out.commit(&args.out.out)?;
    Ok(())
}
