//! Monte Carlo overfitting experiments.
//!
//! For every model order, white-noise samples are fitted by least squares and
//! the spectral statistics of the residuals are averaged over realizations.
//! Realizations are processed in fixed blocks whose partial sums are merged
//! in block order, so results are bit-identical for any thread count.

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{Family, LeastSquares};
use crate::error::{Error, Result};
use crate::rng::{standard_normal_sample, StreamKey, VARIATE_ALGORITHM};
use crate::spectra::{RelativeFloor, ResidualSequence, SpectralAnalyzer};

/// Realizations per work item. Part of the reduction tree, so changing it
/// changes the last bits of the averages.
const BLOCK: u64 = 256;

/// Percentile levels reported for the MLP bracket.
pub const BRACKET_LEVELS: [f64; 3] = [0.05, 0.5, 0.95];

/// Model family of an experiment; `None` analyses the raw samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimFamily {
    Fourier,
    Chebyshev,
    None,
}

impl SimFamily {
    pub fn basis(self) -> Option<Family> {
        match self {
            SimFamily::Fourier => Some(Family::Fourier),
            SimFamily::Chebyshev => Some(Family::Chebyshev),
            SimFamily::None => None,
        }
    }
}

impl From<Family> for SimFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Fourier => SimFamily::Fourier,
            Family::Chebyshev => SimFamily::Chebyshev,
        }
    }
}

impl fmt::Display for SimFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.basis() {
            Some(b) => b.fmt(f),
            None => f.write_str("none"),
        }
    }
}

impl FromStr for SimFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SimFamily::None),
            other => other.parse::<Family>().map(SimFamily::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: SimFamily,
    pub n_points: usize,
    /// Model orders to sweep. Ignored for [`SimFamily::None`], which reports a
    /// single row with order 0.
    pub orders: Vec<usize>,
    pub realizations: u64,
    pub seed: u64,
    /// Weight of the MLP in the reported bracket `1 - eta * MLP`.
    pub eta: f64,
    pub floor: RelativeFloor,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: SimFamily::None,
            n_points: 100,
            orders: Vec::new(),
            realizations: 10_000,
            seed: 0,
            eta: 1.0,
            floor: RelativeFloor::default(),
        }
    }
}

impl ExperimentConfig {
    /// Orders actually run.
    pub fn effective_orders(&self) -> Vec<usize> {
        match self.family {
            SimFamily::None => vec![0],
            _ => self.orders.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_points < 2 {
            return bad(format!(
                "n_points must be at least 2, got {}",
                self.n_points
            ));
        }
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return bad(format!(
                "eta must be finite and non-negative, got {}",
                self.eta
            ));
        }
        RelativeFloor::new(self.floor.value())?;
        if let Some(family) = self.family.basis() {
            if self.orders.is_empty() {
                return bad(format!("family {family} needs at least one order"));
            }
            for &m in &self.orders {
                if m == 0 {
                    return bad("orders must be at least 1".into());
                }
                let p = family.parameter_count(m);
                if p > self.n_points {
                    return bad(format!(
                        "{family} order {m} has {p} parameters for {} points",
                        self.n_points
                    ));
                }
                if family == Family::Fourier && m > self.n_points.div_ceil(2) {
                    return bad(format!(
                        "fourier order {m} exceeds the Nyquist limit {}",
                        self.n_points.div_ceil(2)
                    ));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON of the config and the variate
    /// algorithm identifier.
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct HashInput<'a> {
            config: &'a ExperimentConfig,
            variate_algorithm: &'a str,
        }
        let json = serde_json::to_vec(&HashInput {
            config: self,
            variate_algorithm: VARIATE_ALGORITHM,
        })
        .expect("config serializes");
        format!("{:x}", Sha256::digest(&json))
    }
}

/// 5th, 50th and 95th percentiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentileTriple {
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
}

/// Averages over all successful realizations of one model order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderStats {
    pub order: usize,
    pub realizations: u64,
    pub failures: u64,
    /// Mean `rho_rr(l)` for `l = 0..N-1`.
    pub mean_autocorr: Vec<f64>,
    /// Mean `S_rr(k)`.
    pub mean_signature: Vec<f64>,
    /// Mean correlation spectral power density.
    pub mean_corr_power: Vec<f64>,
    pub mean_mlp: f64,
    /// Percentiles of `1 - eta * MLP`.
    pub mlp_bracket_percentiles: PercentileTriple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub variate_algorithm: String,
    pub orders: Vec<OrderStats>,
}

impl AggregateStats {
    pub fn total_failures(&self) -> u64 {
        self.orders.iter().map(|o| o.failures).sum()
    }

    pub fn order(&self, m: usize) -> Option<&OrderStats> {
        self.orders.iter().find(|o| o.order == m)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone)]
struct VecSum(Vec<CompensatedSum>);

impl VecSum {
    fn new(n: usize) -> Self {
        Self(vec![CompensatedSum::default(); n])
    }

    fn add(&mut self, values: &[f64]) {
        for (s, &v) in self.0.iter_mut().zip(values) {
            s.add(v);
        }
    }

    fn merge(&mut self, other: &VecSum) {
        for (s, o) in self.0.iter_mut().zip(&other.0) {
            s.merge(o);
        }
    }

    fn mean(&self, count: u64) -> Vec<f64> {
        self.0.iter().map(|s| s.value() / count as f64).collect()
    }
}

#[derive(Debug, Clone)]
struct Partial {
    count: u64,
    failures: u64,
    autocorr: VecSum,
    signature: VecSum,
    corr_power: VecSum,
    mlp: CompensatedSum,
    brackets: Vec<f64>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Self {
            count: 0,
            failures: 0,
            autocorr: VecSum::new(n),
            signature: VecSum::new(n),
            corr_power: VecSum::new(n),
            mlp: CompensatedSum::default(),
            brackets: Vec::new(),
        }
    }

    fn merge(&mut self, other: Partial) {
        self.count += other.count;
        self.failures += other.failures;
        self.autocorr.merge(&other.autocorr);
        self.signature.merge(&other.signature);
        self.corr_power.merge(&other.corr_power);
        self.mlp.merge(&other.mlp);
        self.brackets.extend(other.brackets);
    }
}

struct OrderRunner<'a> {
    config: &'a ExperimentConfig,
    order: usize,
    solver: Option<LeastSquares>,
    analyzer: SpectralAnalyzer,
}

impl OrderRunner<'_> {
    fn residuals(&self, realization: u64) -> Result<ResidualSequence> {
        let key = StreamKey {
            seed: self.config.seed,
            order: self.order as u64,
            realization,
        };
        let y = standard_normal_sample(key, self.config.n_points);
        let r = match &self.solver {
            Some(ls) => ls.solve(&y)?.1,
            None => y,
        };
        ResidualSequence::new(r)
    }

    fn run_block(&self, block: u64) -> Partial {
        let mut acc = Partial::new(self.config.n_points);
        let start = block * BLOCK;
        let end = (start + BLOCK).min(self.config.realizations);
        for i in start..end {
            let summary = self
                .residuals(i)
                .and_then(|r| self.analyzer.summarize(&r, self.config.floor));
            match summary {
                Ok(s) => {
                    acc.count += 1;
                    acc.autocorr.add(&s.autocorr);
                    acc.signature.add(&s.signature);
                    acc.corr_power.add(&s.corr_power);
                    acc.mlp.add(s.mlp);
                    acc.brackets.push(1.0 - self.config.eta * s.mlp);
                }
                Err(_) => acc.failures += 1,
            }
        }
        acc
    }

    fn run(&self) -> Result<OrderStats> {
        let blocks = self.config.realizations.div_ceil(BLOCK);
        #[cfg(feature = "parallel")]
        let partials: Vec<Partial> = (0..blocks)
            .into_par_iter()
            .map(|b| self.run_block(b))
            .collect();
        #[cfg(not(feature = "parallel"))]
        let partials: Vec<Partial> = (0..blocks).map(|b| self.run_block(b)).collect();

        let mut total = Partial::new(self.config.n_points);
        for p in partials {
            total.merge(p);
        }
        if total.count == 0 {
            return Err(Error::Internal(format!(
                "every realization failed at order {}",
                self.order
            )));
        }
        let q = percentiles(&total.brackets, &BRACKET_LEVELS)?;
        Ok(OrderStats {
            order: self.order,
            realizations: total.count,
            failures: total.failures,
            mean_autocorr: total.autocorr.mean(total.count),
            mean_signature: total.signature.mean(total.count),
            mean_corr_power: total.corr_power.mean(total.count),
            mean_mlp: total.mlp.value() / total.count as f64,
            mlp_bracket_percentiles: PercentileTriple {
                p05: q[0],
                p50: q[1],
                p95: q[2],
            },
        })
    }
}

/// Runs the sweep described by `config`.
///
/// Sample `i` of order `M` is drawn from the stream keyed by
/// `(seed, M, i)`; see [`crate::rng`]. Realizations whose fit or spectrum
/// fails are counted in `failures` and left out of the averages.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AggregateStats> {
    config.validate()?;
    let analyzer = SpectralAnalyzer::new(config.n_points)?;
    let mut orders = Vec::new();
    for order in config.effective_orders() {
        let solver = match config.family.basis() {
            Some(family) => {
                let grid = family.natural_grid(config.n_points)?;
                Some(LeastSquares::new(&grid, family, order)?)
            }
            None => None,
        };
        let runner = OrderRunner {
            config,
            order,
            solver,
            analyzer: analyzer.clone(),
        };
        orders.push(runner.run()?);
    }
    Ok(AggregateStats {
        config: config.clone(),
        config_hash: config.hash(),
        variate_algorithm: VARIATE_ALGORITHM.to_string(),
        orders,
    })
}

/// Linear-interpolation quantiles: level `q` sits at rank `q * (n - 1)` of
/// the sorted sample, interpolated between its floor and ceiling neighbours.
pub fn percentiles(samples: &[f64], probs: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Precondition("percentiles of an empty sample".into()));
    }
    crate::spectra::check_finite(samples)?;
    if let Some(q) = probs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::Precondition(format!(
            "quantile level {q} outside [0, 1]"
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = (sorted.len() - 1) as f64;
    Ok(probs
        .iter()
        .map(|&q| {
            let rank = q * last;
            let lo = rank.floor() as usize;
            let hi = rank.ceil() as usize;
            let frac = rank - lo as f64;
            if lo == hi {
                sorted[lo]
            } else {
                sorted[lo] + frac * (sorted[hi] - sorted[lo])
            }
        })
        .collect())
}
