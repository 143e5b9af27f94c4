//! Spectral kernels for ordered residual sequences.
//!
//! All transforms use the unshifted DFT ordering `k = 0..N-1` with the
//! forward kernel `exp(-i 2 pi k n / N)` and a `1/N` normalization on the
//! inverse.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Imaginary residue tolerated when a real, even spectrum is transformed back.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Ordered residuals `r_n = y_n - yhat(x_n)`.
///
/// Holds at least two finite values. An all-zero sequence is a valid value
/// (a perfect fit); operations that normalize by the residual sum of squares
/// reject it with [`Error::ZeroResidual`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSequence(Vec<f64>);

impl ResidualSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Precondition(format!(
                "residual sequence needs at least 2 values, got {}",
                values.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Residual sum of squares.
    pub fn rss(&self) -> f64 {
        self.0.iter().map(|r| r * r).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0.0)
    }
}

impl AsRef<[f64]> for ResidualSequence {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ResidualSequence {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Relative floor applied to spectral values before taking logarithms.
///
/// A value `v` is replaced by `max(v, eps * max_k v_k)`. Models that null a
/// Fourier mode exactly would otherwise send the Mean Log Power to `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelativeFloor(f64);

impl RelativeFloor {
    pub const DEFAULT: f64 = 1e-12;

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "relative floor must lie in (0, 1), got {eps}"
            )));
        }
        Ok(Self(eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The absolute floor for a spectrum whose largest entry is `max`.
    pub fn threshold(self, max: f64) -> f64 {
        self.0 * max
    }
}

impl Default for RelativeFloor {
    fn default() -> Self {
        Self(Self::DEFAULT)
    }
}

impl fmt::Display for RelativeFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Everything the loss and the diagnostics need from one residual sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Circular autocorrelation `rho_rr(l)`, `l = 0..N-1`.
    pub autocorr: Vec<f64>,
    /// Power spectral density `|r~_k|^2`.
    pub power: Vec<f64>,
    /// Correlation spectral power density `power / rss`; averages to one.
    pub corr_power: Vec<f64>,
    /// Spectral signature `power / max(power)`.
    pub signature: Vec<f64>,
    /// Mean Log Power of `corr_power` under the configured floor.
    pub mlp: f64,
    pub rss: f64,
}

/// Power spectrum of one residual sequence and its two normalizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSpectrum {
    pub power: Vec<f64>,
    pub corr_power: Vec<f64>,
    pub signature: Vec<f64>,
    pub rss: f64,
}

/// FFT plans for a fixed sequence length.
///
/// Planning dominates the cost of short transforms, so Monte Carlo loops
/// build one analyzer per length and reuse it. The analyzer is immutable and
/// can be shared between threads.
#[derive(Clone)]
pub struct SpectralAnalyzer {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralAnalyzer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralAnalyzer")
            .field("len", &self.len)
            .finish()
    }
}

impl SpectralAnalyzer {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Precondition(
                "transform length must be positive".into(),
            ));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len {
            return Err(Error::Precondition(format!(
                "analyzer planned for length {}, got {got}",
                self.len
            )));
        }
        Ok(())
    }

    /// Forward DFT of a real sequence.
    pub fn dft(&self, values: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(values.len())?;
        check_finite(values)?;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Inverse DFT including the `1/N` factor.
    pub fn inverse_dft(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(spectrum.len())?;
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        for v in &mut buf {
            *v *= scale;
        }
        Ok(buf)
    }

    /// `|r~_k|^2` for `k = 0..N-1`.
    pub fn raw_power(&self, values: &[f64]) -> Result<Vec<f64>> {
        Ok(self.dft(values)?.iter().map(|c| c.norm_sqr()).collect())
    }

    pub fn power_spectrum(&self, r: &ResidualSequence) -> Result<PowerSpectrum> {
        let rss = nonzero_rss(r)?;
        let power = self.raw_power(r.as_slice())?;
        Ok(normalize_power(power, rss))
    }

    /// Circular autocorrelation via the inverse transform of the power
    /// spectrum.
    pub fn circular_autocorrelation(&self, r: &ResidualSequence) -> Result<Vec<f64>> {
        let rss = nonzero_rss(r)?;
        let power = self.raw_power(r.as_slice())?;
        self.autocorr_from_power(&power, rss)
    }

    fn autocorr_from_power(&self, power: &[f64], rss: f64) -> Result<Vec<f64>> {
        let spectrum: Vec<Complex64> = power.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        let lagged = self.inverse_dft(&spectrum)?;
        let n = self.len;
        let mut rho = Vec::with_capacity(n);
        for (l, c) in lagged.iter().enumerate() {
            if c.im.abs() > IMAG_RESIDUE_TOL * rss {
                return Err(Error::Internal(format!(
                    "autocorrelation lag {l} has imaginary residue {:e}",
                    c.im
                )));
            }
            rho.push(c.re / rss);
        }
        // Enforce the exact identities rho(0) = 1 and rho(l) = rho(N - l)
        // that round-off would otherwise break in the last bits.
        rho[0] = 1.0;
        for l in 1..=n / 2 {
            let m = n - l;
            let even = 0.5 * (rho[l] + rho[m]);
            rho[l] = even;
            rho[m] = even;
        }
        Ok(rho)
    }

    /// Full spectral summary; the workhorse of the Monte Carlo harness.
    pub fn summarize(&self, r: &ResidualSequence, floor: RelativeFloor) -> Result<SpectralSummary> {
        let rss = nonzero_rss(r)?;
        let power = self.raw_power(r.as_slice())?;
        let autocorr = self.autocorr_from_power(&power, rss)?;
        let PowerSpectrum {
            power,
            corr_power,
            signature,
            rss,
        } = normalize_power(power, rss);
        let mlp = mean_log_power(&corr_power, floor)?;
        Ok(SpectralSummary {
            autocorr,
            power,
            corr_power,
            signature,
            mlp,
            rss,
        })
    }
}

fn nonzero_rss(r: &ResidualSequence) -> Result<f64> {
    let rss = r.rss();
    if rss > 0.0 {
        Ok(rss)
    } else {
        Err(Error::ZeroResidual)
    }
}

fn normalize_power(power: Vec<f64>, rss: f64) -> PowerSpectrum {
    let max = power.iter().copied().fold(0.0_f64, f64::max);
    let corr_power = power.iter().map(|p| p / rss).collect();
    let signature = power.iter().map(|p| p / max).collect();
    PowerSpectrum {
        power,
        corr_power,
        signature,
        rss,
    }
}

/// Forward DFT `r~_k = sum_n r_n exp(-i 2 pi k n / N)` of a real sequence.
pub fn dft(values: &[f64]) -> Result<Vec<Complex64>> {
    if values.is_empty() {
        return Err(Error::Precondition("DFT of an empty sequence".into()));
    }
    SpectralAnalyzer::new(values.len())?.dft(values)
}

/// Inverse DFT `r_n = (1/N) sum_k r~_k exp(i 2 pi k n / N)`.
pub fn inverse_dft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    if spectrum.is_empty() {
        return Err(Error::Precondition(
            "inverse DFT of an empty sequence".into(),
        ));
    }
    SpectralAnalyzer::new(spectrum.len())?.inverse_dft(spectrum)
}

/// `rho_rr(l) = sum_n r_n r_{(n-l) mod N} / rss`.
pub fn circular_autocorrelation(r: &ResidualSequence) -> Result<Vec<f64>> {
    SpectralAnalyzer::new(r.len())?.circular_autocorrelation(r)
}

pub fn power_spectrum(r: &ResidualSequence) -> Result<PowerSpectrum> {
    SpectralAnalyzer::new(r.len())?.power_spectrum(r)
}

pub fn summarize(r: &ResidualSequence, floor: RelativeFloor) -> Result<SpectralSummary> {
    SpectralAnalyzer::new(r.len())?.summarize(r, floor)
}

/// Mean Log Power `(1/N) sum_k ln(max(c_k, eps * max_k c_k))`.
///
/// For a correlation spectrum (mean one) the result is never positive; values
/// above zero can only come from round-off and are clamped.
pub fn mean_log_power(corr_power: &[f64], floor: RelativeFloor) -> Result<f64> {
    if corr_power.is_empty() {
        return Err(Error::Precondition(
            "mean log power of an empty spectrum".into(),
        ));
    }
    check_finite(corr_power)?;
    if let Some(index) = corr_power.iter().position(|&c| c < 0.0) {
        return Err(Error::Precondition(format!(
            "negative spectral power at k = {index}"
        )));
    }
    let max = corr_power.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(Error::ZeroResidual);
    }
    let lower = floor.threshold(max);
    let sum: f64 = corr_power.iter().map(|&c| c.max(lower).ln()).sum();
    Ok((sum / corr_power.len() as f64).min(0.0))
}
