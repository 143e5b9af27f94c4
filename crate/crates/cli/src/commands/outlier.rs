use clap::Args;
use resent_core::fit::{outlier_demo, OutlierDemoConfig};
use resent_core::Family;

use super::OptimizerArgs;
use crate::io::{CmdResult, OutputSet};
use crate::OutDir;

#[derive(Debug, Args)]
pub struct OutlierArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value = "fourier")]
    pub family: Family,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub noise_sd: f64,
    /// Fraction of points displaced by --outlier-size.
    #[arg(long, default_value_t = 0.05)]
    pub outlier_fraction: f64,
    #[arg(long, default_value_t = 2.0)]
    pub outlier_size: f64,
    /// Comma-separated eta values to compare.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub out: OutDir,
}

pub fn run(args: OutlierArgs) -> CmdResult {
    let cfg = OutlierDemoConfig {
        n_points: args.n,
        family: args.family,
        order: args.order,
        noise_sd: args.noise_sd,
        outlier_fraction: args.outlier_fraction,
        outlier_size: args.outlier_size,
        etas: args.etas,
        seed: args.seed,
        optimizer: args.optimizer.config()?,
    };
    let report = outlier_demo(&cfg)?;
    let mut out = OutputSet::default();
    out.add_json("outlier_report.json", &report);
    out.commit(&args.out.out)?;
    Ok(())
}
