//! Residual-entropy extension of the mean squared error loss.
//!
//! The crate is split along the data flow of a residual analysis:
//!
//! * [`spectra`] turns an ordered residual sequence into its circular
//!   autocorrelation, power spectrum, spectral signature and Mean Log Power.
//! * [`loss`] defines the plain MSE and the entropy-extended loss
//!   `L = MSE * (1 - eta * MLP)`.
//! * [`basis`] builds truncated Fourier and Chebyshev design matrices and fits
//!   them by least squares.
//! * [`sim`] runs reproducible Monte Carlo overfitting sweeps.
//! * [`fit`] minimizes the entropy-extended loss starting from the least
//!   squares solution.

pub mod basis;
pub mod error;
pub mod fit;
pub mod loss;
pub mod optim;
pub mod rng;
pub mod sim;
pub mod spectra;

pub use basis::{design_matrix, ols_fit, predict, BasisModel, Family, FitResult, Grid, GridKind};
pub use error::{Error, Result};
pub use fit::{fit_entropy_loss, loss_landscape, EntropyFit, LandscapeRow, OptimizerConfig};
pub use loss::{circulant_log_det, entropy_loss, mse, LossBreakdown, LossSpec};
pub use sim::{percentiles, run_experiment, AggregateStats, ExperimentConfig, SimFamily};
pub use spectra::{
    circular_autocorrelation, dft, inverse_dft, mean_log_power, power_spectrum, RelativeFloor,
    ResidualSequence, SpectralAnalyzer, SpectralSummary,
};
