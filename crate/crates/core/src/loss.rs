//! Plain and entropy-extended regression losses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{check_finite, RelativeFloor, ResidualSequence, SpectralAnalyzer};

/// Eigenvalues below this are treated as genuinely negative rather than
/// round-off when checking a circulant correlation estimate.
pub const NON_PSD_TOL: f64 = -1e-10;

/// Parameters of the entropy-extended loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    eta: f64,
    floor: RelativeFloor,
}

impl LossSpec {
    pub fn new(eta: f64, floor: RelativeFloor) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "eta must be finite and non-negative, got {eta}"
            )));
        }
        Ok(Self { eta, floor })
    }

    /// Plain least squares: `eta = 0`.
    pub fn mse_only() -> Self {
        Self {
            eta: 0.0,
            floor: RelativeFloor::default(),
        }
    }

    pub fn with_eta(eta: f64) -> Result<Self> {
        Self::new(eta, RelativeFloor::default())
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn floor(&self) -> RelativeFloor {
        self.floor
    }
}

impl Default for LossSpec {
    fn default() -> Self {
        Self::mse_only()
    }
}

/// MSE, Mean Log Power and their combination `total = mse * (1 - eta * mlp)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub mse: f64,
    pub mlp: f64,
    pub total: f64,
}

impl LossBreakdown {
    /// The multiplier applied to the MSE.
    pub fn bracket(&self, eta: f64) -> f64 {
        1.0 - eta * self.mlp
    }
}

/// `(1/N) sum r_n^2`. Zero for an empty slice.
pub fn mse(residuals: &[f64]) -> f64 {
    if residuals.is_empty() {
        return 0.0;
    }
    residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64
}

/// Entropy-extended loss of one residual sequence.
///
/// An identically zero sequence is a perfect fit and scores `(0, 0, 0)`.
pub fn entropy_loss(r: &ResidualSequence, spec: &LossSpec) -> Result<LossBreakdown> {
    SpectralAnalyzer::new(r.len())?.entropy_loss(r, spec)
}

impl SpectralAnalyzer {
    /// [`entropy_loss`] reusing this analyzer's FFT plans.
    pub fn entropy_loss(&self, r: &ResidualSequence, spec: &LossSpec) -> Result<LossBreakdown> {
        let mse = mse(r.as_slice());
        if r.is_zero() {
            return Ok(LossBreakdown {
                mse: 0.0,
                mlp: 0.0,
                total: 0.0,
            });
        }
        let spectrum = self.power_spectrum(r)?;
        let mlp = crate::spectra::mean_log_power(&spectrum.corr_power, spec.floor)?;
        let total = mse * (1.0 - spec.eta * mlp);
        if !total.is_finite() {
            return Err(Error::Internal(format!("loss evaluated to {total}")));
        }
        Ok(LossBreakdown { mse, mlp, total })
    }
}

/// Log-determinant of the circulant matrix whose first column is `rho`.
///
/// The eigenvalues of a circulant matrix are the DFT of its first column; the
/// same relative floor as [`crate::spectra::mean_log_power`] is applied
/// before taking logarithms. For `rho` equal to the autocorrelation of a
/// residual sequence this equals `N * MLP` of that sequence.
pub fn circulant_log_det(rho: &[f64], floor: RelativeFloor) -> Result<f64> {
    if rho.is_empty() {
        return Err(Error::Precondition("empty circulant column".into()));
    }
    check_finite(rho)?;
    if (rho[0] - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "correlation column must start with 1, got {}",
            rho[0]
        )));
    }
    let eigen: Vec<f64> = crate::spectra::dft(rho)?.iter().map(|c| c.re).collect();
    if let Some((index, &value)) = eigen.iter().enumerate().find(|(_, &v)| v < NON_PSD_TOL) {
        return Err(Error::NonPsd { index, value });
    }
    let max = eigen.iter().copied().fold(0.0_f64, f64::max);
    let lower = floor.threshold(max);
    Ok(eigen.iter().map(|&v| v.max(lower).ln()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn seq(v: &[f64]) -> ResidualSequence {
        ResidualSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mse_values() {
        assert_eq!(mse(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(mse(&[1.0, 2.0, 3.0, 4.0]), 7.5);
    }

    #[test]
    fn impulse_loss_equals_mse() {
        for eta in [0.0, 0.5, 1.0, 10.0] {
            let b = entropy_loss(
                &seq(&[1.0, 0.0, 0.0, 0.0]),
                &LossSpec::with_eta(eta).unwrap(),
            )
            .unwrap();
            assert_eq!(b.mse, 0.25);
            assert_eq!(b.mlp, 0.0);
            assert_eq!(b.total, 0.25);
        }
    }

    #[test]
    fn zero_residuals_score_zero() {
        let b = entropy_loss(&seq(&[0.0; 5]), &LossSpec::with_eta(1.0).unwrap()).unwrap();
        assert_eq!(
            b,
            LossBreakdown {
                mse: 0.0,
                mlp: 0.0,
                total: 0.0
            }
        );
    }

    #[test]
    fn eta_validation() {
        assert!(LossSpec::with_eta(-0.1).is_err());
        assert!(LossSpec::with_eta(f64::INFINITY).is_err());
    }

    #[test]
    fn identity_column_has_zero_log_det() {
        let mut rho = vec![0.0; 8];
        rho[0] = 1.0;
        assert!(
            circulant_log_det(&rho, RelativeFloor::default())
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn four_point_singular_column() {
        // eigenvalues (2, 1, 0, 1)
        let eps = 1e-12;
        let got =
            circulant_log_det(&[1.0, 0.5, 0.0, 0.5], RelativeFloor::new(eps).unwrap()).unwrap();
        let expected = 2f64.ln() + (eps * 2.0).ln();
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    #[test]
    fn non_psd_column_is_reported() {
        // eigenvalues 1 + 2 * 0.9 cos(2 pi k / 4): k = 2 gives -0.8
        let err = circulant_log_det(&[1.0, 0.9, 0.0, 0.9], RelativeFloor::default()).unwrap_err();
        assert!(matches!(err, Error::NonPsd { index: 2, .. }), "{err:?}");
    }

    #[test]
    fn column_must_be_normalized() {
        assert!(circulant_log_det(&[2.0, 0.0], RelativeFloor::default()).is_err());
    }
}
