//! Browser bindings: fit-and-spectrum view, averaged residual curves and a
//! loss-landscape slice. Each export returns a small struct whose getters
//! hand typed arrays to JavaScript.

use resent_core::fit::{demo_signal, OptimizerConfig};
use resent_core::rng::{standard_normal_sample, StreamKey};
use resent_core::{
    fit_entropy_loss, loss_landscape, predict, run_experiment, ExperimentConfig, Family, Grid,
    LossSpec, RelativeFloor, SimFamily, SpectralAnalyzer,
};
use wasm_bindgen::prelude::*;

fn family(name: &str) -> Result<Family, String> {
    name.parse().map_err(|e: resent_core::Error| e.to_string())
}

/// Demo signal plus Gaussian noise on the family's natural grid.
fn sample(family: Family, n: usize, noise_sd: f64, seed: u64) -> Result<(Grid, Vec<f64>), String> {
    let grid = family.natural_grid(n).map_err(|e| e.to_string())?;
    let noise = standard_normal_sample(
        StreamKey {
            seed,
            order: 0,
            realization: 0,
        },
        n,
    );
    // The Fourier grid spans one period; stretch it over [-1, 1) otherwise.
    let period = if family == Family::Fourier { 1.0 } else { 0.5 };
    let y = grid
        .locations()
        .iter()
        .zip(noise)
        .map(|(&x, e)| demo_signal(x * period) + noise_sd * e)
        .collect();
    Ok((grid, y))
}

#[wasm_bindgen]
pub struct FitView {
    x: Vec<f64>,
    y: Vec<f64>,
    ols_curve: Vec<f64>,
    fit_curve: Vec<f64>,
    autocorr: Vec<f64>,
    corr_power: Vec<f64>,
    ols_loss: [f64; 3],
    fit_loss: [f64; 3],
    converged: bool,
}

#[wasm_bindgen]
impl FitView {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ols_curve(&self) -> Vec<f64> {
        self.ols_curve.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn fit_curve(&self) -> Vec<f64> {
        self.fit_curve.clone()
    }
    /// Circular autocorrelation of the entropy-loss residuals.
    #[wasm_bindgen(getter)]
    pub fn autocorr(&self) -> Vec<f64> {
        self.autocorr.clone()
    }
    /// Normalized power spectrum of the entropy-loss residuals.
    #[wasm_bindgen(getter)]
    pub fn corr_power(&self) -> Vec<f64> {
        self.corr_power.clone()
    }
    /// `[mse, mlp, total]` at the least-squares solution.
    #[wasm_bindgen(getter)]
    pub fn ols_loss(&self) -> Vec<f64> {
        self.ols_loss.to_vec()
    }
    /// `[mse, mlp, total]` at the entropy-loss optimum.
    #[wasm_bindgen(getter)]
    pub fn fit_loss(&self) -> Vec<f64> {
        self.fit_loss.to_vec()
    }
    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.converged
    }
}

/// Fits a noisy demo signal by least squares and by the entropy loss, and
/// returns both curves with the residual spectrum of the latter.
#[wasm_bindgen]
pub fn fit_and_spectrum(
    family_name: &str,
    order: usize,
    eta: f64,
    n: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<FitView, String> {
    let fam = family(family_name)?;
    let (grid, y) = sample(fam, n, noise_sd, seed)?;
    let spec = LossSpec::with_eta(eta).map_err(|e| e.to_string())?;
    let opt = OptimizerConfig {
        max_iters: 3000,
        ..OptimizerConfig::default()
    };
    let fit = fit_entropy_loss(&grid, &y, fam, order, &spec, &opt).map_err(|e| e.to_string())?;
    let (autocorr, corr_power) = if fit.fit.residuals.is_zero() {
        (vec![0.0; n], vec![0.0; n])
    } else {
        let s = SpectralAnalyzer::new(n)
            .and_then(|a| a.summarize(&fit.fit.residuals, spec.floor()))
            .map_err(|e| e.to_string())?;
        (s.autocorr, s.corr_power)
    };
    let triple = |l: resent_core::LossBreakdown| [l.mse, l.mlp, l.total];
    Ok(FitView {
        x: grid.locations().to_vec(),
        ols_curve: predict(&fit.ols.model, &grid),
        fit_curve: predict(&fit.fit.model, &grid),
        y,
        autocorr,
        corr_power,
        ols_loss: triple(fit.ols.loss),
        fit_loss: triple(fit.fit.loss),
        converged: fit.converged,
    })
}

#[wasm_bindgen]
pub struct AverageView {
    mean_autocorr: Vec<f64>,
    mean_signature: Vec<f64>,
    mean_corr_power: Vec<f64>,
    bracket: [f64; 3],
}

#[wasm_bindgen]
impl AverageView {
    #[wasm_bindgen(getter)]
    pub fn mean_autocorr(&self) -> Vec<f64> {
        self.mean_autocorr.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mean_signature(&self) -> Vec<f64> {
        self.mean_signature.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mean_corr_power(&self) -> Vec<f64> {
        self.mean_corr_power.clone()
    }
    /// 5th, 50th and 95th percentiles of `1 - eta * MLP`.
    #[wasm_bindgen(getter)]
    pub fn bracket(&self) -> Vec<f64> {
        self.bracket.to_vec()
    }
}

/// Residual curves averaged over white-noise realizations for one order.
/// `family_name` may be `none` for unfitted noise.
#[wasm_bindgen]
pub fn averaged_curves(
    family_name: &str,
    order: usize,
    n: usize,
    realizations: u32,
    seed: u64,
) -> Result<AverageView, String> {
    let family: SimFamily = family_name
        .parse()
        .map_err(|e: resent_core::Error| e.to_string())?;
    let config = ExperimentConfig {
        family,
        n_points: n,
        orders: if family == SimFamily::None {
            vec![]
        } else {
            vec![order]
        },
        realizations: realizations.into(),
        seed,
        eta: 1.0,
        floor: RelativeFloor::default(),
    };
    let stats = run_experiment(&config).map_err(|e| e.to_string())?;
    let o = stats.orders.into_iter().next().expect("one order");
    let p = o.mlp_bracket_percentiles;
    Ok(AverageView {
        mean_autocorr: o.mean_autocorr,
        mean_signature: o.mean_signature,
        mean_corr_power: o.mean_corr_power,
        bracket: [p.p05, p.p50, p.p95],
    })
}

#[wasm_bindgen]
pub struct LandscapeView {
    value: Vec<f64>,
    mse: Vec<f64>,
    total: Vec<f64>,
}

#[wasm_bindgen]
impl LandscapeView {
    #[wasm_bindgen(getter)]
    pub fn value(&self) -> Vec<f64> {
        self.value.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mse(&self) -> Vec<f64> {
        self.mse.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn total(&self) -> Vec<f64> {
        self.total.clone()
    }
}

/// MSE and entropy loss along coefficient `axis`, within `span` of its
/// least-squares value, for the same noisy sample as `fit_and_spectrum`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn landscape(
    family_name: &str,
    order: usize,
    eta: f64,
    axis: usize,
    span: f64,
    steps: usize,
    n: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<LandscapeView, String> {
    let fam = family(family_name)?;
    let (grid, y) = sample(fam, n, noise_sd, seed)?;
    let spec = LossSpec::with_eta(eta).map_err(|e| e.to_string())?;
    let centre = resent_core::basis::LeastSquares::new(&grid, fam, order)
        .and_then(|ls| ls.solve(&y))
        .map_err(|e| e.to_string())?
        .0
        .coefficients()
        .get(axis)
        .copied()
        .ok_or_else(|| format!("axis {axis} out of range"))?;
    let rows = loss_landscape(
        &grid,
        &y,
        fam,
        order,
        &spec,
        axis,
        (centre - span, centre + span),
        steps,
    )
    .map_err(|e| e.to_string())?;
    Ok(LandscapeView {
        value: rows.iter().map(|r| r.value).collect(),
        mse: rows.iter().map(|r| r.mse).collect(),
        total: rows.iter().map(|r| r.total).collect(),
    })
}
