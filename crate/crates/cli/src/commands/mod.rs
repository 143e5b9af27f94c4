pub mod fit;
pub mod landscape;
pub mod loss_eval;
pub mod outlier;
pub mod simulate;

use std::path::Path;

use anyhow::anyhow;
use clap::Args;
use resent_core::fit::Method;
use resent_core::{Family, Grid, LossSpec, OptimizerConfig, RelativeFloor};

use crate::io::{read_columns, CmdError, CmdResult};

/// Loss weighting flags.
#[derive(Debug, Clone, Args)]
pub struct LossArgs {
    /// Weight of the mean-log-power term (0 gives plain MSE).
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Relative spectral floor applied before taking logs.
    #[arg(long, default_value_t = RelativeFloor::DEFAULT)]
    pub floor: f64,
}

impl LossArgs {
    pub fn spec(&self) -> CmdResult<LossSpec> {
        let floor = RelativeFloor::new(self.floor).map_err(CmdError::usage)?;
        LossSpec::new(self.eta, floor).map_err(CmdError::usage)
    }
}

/// Optimizer flags for the entropy-loss fit.
#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// nelder-mead or gradient-descent.
    #[arg(long, default_value = "nelder-mead")]
    pub optimizer: Method,
    #[arg(long, default_value_t = OptimizerConfig::default().max_iters)]
    pub max_iters: usize,
    #[arg(long, default_value_t = OptimizerConfig::default().tol_abs)]
    pub tol_abs: f64,
    #[arg(long, default_value_t = OptimizerConfig::default().tol_rel)]
    pub tol_rel: f64,
    /// Initial simplex edge relative to the coefficient scale.
    #[arg(long, default_value_t = OptimizerConfig::default().step_scale)]
    pub step_scale: f64,
    /// Extra optimizer passes restarted from the incumbent.
    #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
    pub restarts: usize,
    /// Seed orienting restarted simplices.
    #[arg(long = "opt-seed", default_value_t = 0)]
    pub opt_seed: u64,
}

impl OptimizerArgs {
    pub fn config(&self) -> CmdResult<OptimizerConfig> {
        let cfg = OptimizerConfig {
            method: self.optimizer,
            max_iters: self.max_iters,
            tol_abs: self.tol_abs,
            tol_rel: self.tol_rel,
            step_scale: self.step_scale,
            restarts: self.restarts,
            seed: self.opt_seed,
        };
        cfg.validate().map_err(CmdError::usage)?;
        Ok(cfg)
    }
}

/// Reads an `x,y` CSV. Samples lying exactly on the family's natural grid get
/// that grid (and its Nyquist check); anything else becomes a custom grid.
pub fn load_xy(path: &Path, family: Family) -> CmdResult<(Grid, Vec<f64>)> {
    let mut cols = read_columns(path, &["x", "y"])?;
    let y = cols.pop().expect("two columns");
    let x = cols.pop().expect("two columns");
    if x.len() < 2 {
        return Err(CmdError::data(anyhow!(
            "{}: need at least 2 rows, got {}",
            path.display(),
            x.len()
        )));
    }
    let natural = family.natural_grid(x.len())?;
    let on_grid = natural
        .locations()
        .iter()
        .zip(&x)
        .all(|(a, b)| (a - b).abs() <= 1e-12);
    let grid = if on_grid {
        natural
    } else {
        Grid::custom(x).map_err(|e| CmdError::data(anyhow!("{}: {e}", path.display())))?
    };
    Ok((grid, y))
}
