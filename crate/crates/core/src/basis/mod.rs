//! Truncated Fourier and Chebyshev series models fitted by least squares.

mod qr;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use qr::{Matrix, QrFactorization};

use crate::error::{Error, Result};
use crate::loss::{LossBreakdown, LossSpec};
use crate::spectra::{check_finite, ResidualSequence, SpectralAnalyzer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fourier,
    Chebyshev,
}

impl Family {
    /// Number of coefficients of an order-`order` model.
    pub fn parameter_count(self, order: usize) -> usize {
        match self {
            Family::Fourier => 2 * order - 1,
            Family::Chebyshev => order,
        }
    }

    /// The evenly spaced grid the overfitting simulations use for this
    /// family.
    pub fn natural_grid(self, n: usize) -> Result<Grid> {
        match self {
            Family::Fourier => Grid::fourier(n),
            Family::Chebyshev => Grid::chebyshev(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fourier => "fourier",
            Family::Chebyshev => "chebyshev",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Family::Fourier),
            "chebyshev" => Ok(Family::Chebyshev),
            other => Err(Error::InvalidConfig(format!(
                "unknown basis family '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// `x_n = -0.5 + n/N` on `[-0.5, 0.5)`.
    Fourier,
    /// `x_n = -1 + 2n/N` on `[-1, 1)`.
    Chebyshev,
    Custom,
}

/// Ordered input locations of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    locations: Vec<f64>,
    kind: GridKind,
}

impl Grid {
    pub fn fourier(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        let nf = n as f64;
        Ok(Self {
            locations: (0..n).map(|i| -0.5 + i as f64 / nf).collect(),
            kind: GridKind::Fourier,
        })
    }

    pub fn chebyshev(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        let nf = n as f64;
        Ok(Self {
            locations: (0..n).map(|i| -1.0 + 2.0 * i as f64 / nf).collect(),
            kind: GridKind::Chebyshev,
        })
    }

    /// Arbitrary strictly increasing, finite locations.
    pub fn custom(locations: Vec<f64>) -> Result<Self> {
        check_grid_size(locations.len())?;
        check_finite(&locations).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        if let Some(i) = locations.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "locations must be strictly increasing: x[{}] = {} >= x[{}] = {}",
                i,
                locations[i],
                i + 1,
                locations[i + 1]
            )));
        }
        Ok(Self {
            locations,
            kind: GridKind::Custom,
        })
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }
}

fn check_grid_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {n}"
        )));
    }
    Ok(())
}

/// A truncated series model with its coefficient vector.
///
/// Fourier coefficients are laid out as `(a_0, a_1..a_{M-1}, b_1..b_{M-1})`
/// for `a_0/2 + sum a_m cos(2 pi m x) + b_m sin(2 pi m x)`; Chebyshev
/// coefficients as `(a_0..a_{M-1})` for `sum a_m T_m(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisModel {
    family: Family,
    order: usize,
    coefficients: Vec<f64>,
}

impl BasisModel {
    pub fn new(family: Family, order: usize, coefficients: Vec<f64>) -> Result<Self> {
        check_order(order)?;
        let expected = family.parameter_count(order);
        if coefficients.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "{family} order {order} needs {expected} coefficients, got {}",
                coefficients.len()
            )));
        }
        check_finite(&coefficients)?;
        Ok(Self {
            family,
            order,
            coefficients,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Evaluates the series at one location.
    pub fn eval(&self, x: f64) -> f64 {
        let mut row = vec![0.0; self.coefficients.len()];
        fill_row(self.family, self.order, x, &mut row);
        row.iter().zip(&self.coefficients).map(|(b, c)| b * c).sum()
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidConfig(
            "model order must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Basis function values at `x`, in coefficient order.
fn fill_row(family: Family, order: usize, x: f64, row: &mut [f64]) {
    match family {
        Family::Fourier => {
            row[0] = 0.5;
            for m in 1..order {
                let phase = 2.0 * PI * m as f64 * x;
                row[m] = phase.cos();
                row[order - 1 + m] = phase.sin();
            }
        }
        Family::Chebyshev => chebyshev_values(x, row),
    }
}

/// `T_0(x), T_1(x), ...` by the three-term recurrence, as many as `out` holds.
pub fn chebyshev_values(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for m in 2..out.len() {
        out[m] = 2.0 * x * out[m - 1] - out[m - 2];
    }
}

/// `N x p` design matrix of `family` at order `order` on `grid`.
pub fn design_matrix(grid: &Grid, family: Family, order: usize) -> Result<Matrix> {
    check_order(order)?;
    let n = grid.len();
    let p = family.parameter_count(order);
    if p > n {
        return Err(Error::OverdeterminedBasis {
            params: p,
            points: n,
        });
    }
    let mut a = Matrix::zeros(n, p);
    let mut row = vec![0.0; p];
    for (i, &x) in grid.locations().iter().enumerate() {
        fill_row(family, order, x, &mut row);
        for (j, &v) in row.iter().enumerate() {
            a.set(i, j, v);
        }
    }
    Ok(a)
}

/// `yhat(x_n | theta)` at every grid location.
pub fn predict(model: &BasisModel, grid: &Grid) -> Vec<f64> {
    let mut row = vec![0.0; model.coefficients.len()];
    grid.locations()
        .iter()
        .map(|&x| {
            fill_row(model.family, model.order, x, &mut row);
            row.iter()
                .zip(&model.coefficients)
                .map(|(b, c)| b * c)
                .sum()
        })
        .collect()
}

/// A fitted model with its residuals and loss.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: BasisModel,
    pub residuals: ResidualSequence,
    pub loss: LossBreakdown,
    pub condition_estimate: f64,
}

/// Prefactored least-squares problem for a fixed grid and basis.
///
/// The Monte Carlo harness fits thousands of samples on the same design, so
/// the factorization is computed once and reused for every right-hand side.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    family: Family,
    order: usize,
    design: Matrix,
    qr: QrFactorization,
}

impl LeastSquares {
    pub fn new(grid: &Grid, family: Family, order: usize) -> Result<Self> {
        Self::with_rank_tol(grid, family, order, None)
    }

    /// `rank_tol` is an absolute pivot threshold; `None` uses
    /// `eps * sqrt(N) * max column norm`.
    pub fn with_rank_tol(
        grid: &Grid,
        family: Family,
        order: usize,
        rank_tol: Option<f64>,
    ) -> Result<Self> {
        check_order(order)?;
        if family == Family::Fourier && grid.kind() == GridKind::Fourier {
            let max = grid.len().div_ceil(2);
            if order > max {
                return Err(Error::AboveNyquist {
                    order,
                    max,
                    points: grid.len(),
                });
            }
        }
        let design = design_matrix(grid, family, order)?;
        let qr = QrFactorization::new(&design, rank_tol)?;
        Ok(Self {
            family,
            order,
            design,
            qr,
        })
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn condition_estimate(&self) -> f64 {
        self.qr.condition_estimate()
    }

    pub fn points(&self) -> usize {
        self.design.rows()
    }

    /// Coefficients and residuals for one sample.
    pub fn solve(&self, y: &[f64]) -> Result<(BasisModel, Vec<f64>)> {
        if y.len() != self.points() {
            return Err(Error::Precondition(format!(
                "expected {} observations, got {}",
                self.points(),
                y.len()
            )));
        }
        check_finite(y)?;
        let (coef, mut resid) = self.qr.solve(y);
        // A fit that reproduces the data to round-off is a perfect fit.
        let scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let noise = f64::EPSILON * y.len() as f64 * scale;
        if resid.iter().all(|r| r.abs() <= noise) {
            resid.iter_mut().for_each(|r| *r = 0.0);
        }
        check_finite(&coef).map_err(|_| Error::SingularDesign {
            condition: self.condition_estimate(),
        })?;
        Ok((BasisModel::new(self.family, self.order, coef)?, resid))
    }

    /// Full [`FitResult`] for one sample.
    pub fn fit(&self, y: &[f64], spec: &LossSpec) -> Result<FitResult> {
        let (model, resid) = self.solve(y)?;
        let residuals = ResidualSequence::new(resid)?;
        let loss = SpectralAnalyzer::new(residuals.len())?.entropy_loss(&residuals, spec)?;
        Ok(FitResult {
            model,
            residuals,
            loss,
            condition_estimate: self.condition_estimate(),
        })
    }
}

/// Ordinary least-squares fit of `family` at order `order` to `(grid, y)`.
///
/// Solved by column-pivoted Householder QR rather than the normal equations.
/// `spec` only affects the reported loss breakdown.
pub fn ols_fit(
    grid: &Grid,
    y: &[f64],
    family: Family,
    order: usize,
    spec: &LossSpec,
) -> Result<FitResult> {
    LeastSquares::new(grid, family, order)?.fit(y, spec)
}
