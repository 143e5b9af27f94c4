use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::anyhow;
use clap::Args;
use resent_core::{run_experiment, AggregateStats, ExperimentConfig, RelativeFloor, SimFamily};
use serde::Serialize;

use crate::io::{CmdError, CmdResult, CsvText, OutputSet};
use crate::OutDir;

const FULL_SCALE: u64 = 100_000;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Basis fitted to each noise realization: fourier, chebyshev or none.
    #[arg(long)]
    pub family: SimFamily,
    /// Points per realization.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Comma-separated model orders (ignored for --family none).
    #[arg(long, value_delimiter = ',')]
    pub orders: Vec<usize>,
    /// Noise realizations per order.
    #[arg(long, default_value_t = 10_000, conflicts_with = "full_scale")]
    pub realizations: u64,
    /// Use 100000 realizations per order.
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = RelativeFloor::DEFAULT)]
    pub floor: f64,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, env = "RESENT_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Add elapsed wall time to manifest.json (makes it non-reproducible).
    #[arg(long)]
    pub record_wall_time: bool,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a ExperimentConfig,
    config_hash: &'a str,
    variate_algorithm: &'a str,
    failures: BTreeMap<usize, u64>,
    outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_seconds: Option<f64>,
}

pub fn run(args: SimulateArgs) -> CmdResult {
    if args.family == SimFamily::None && !args.orders.is_empty() {
        return Err(CmdError::usage(anyhow!(
            "--orders has no effect with --family none"
        )));
    }
    let floor = RelativeFloor::new(args.floor).map_err(CmdError::usage)?;
    let config = ExperimentConfig {
        family: args.family,
        n_points: args.n,
        orders: args.orders.clone(),
        realizations: if args.full_scale {
            FULL_SCALE
        } else {
            args.realizations
        },
        seed: args.seed,
        eta: args.eta,
        floor,
    };
    config.validate().map_err(CmdError::usage)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(CmdError::usage)?;
    let start = Instant::now();
    let stats = pool.install(|| run_experiment(&config))?;
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!(
        "simulated {} realizations x {} orders in {elapsed:.2}s",
        config.realizations,
        stats.orders.len()
    );

    let mut outputs = render(&stats);
    let mut names = outputs.names();
    names.push("manifest.json".into());
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "simulate",
        config: &stats.config,
        config_hash: &stats.config_hash,
        variate_algorithm: &stats.variate_algorithm,
        failures: stats.orders.iter().map(|o| (o.order, o.failures)).collect(),
        outputs: names,
        wall_time_seconds: args.record_wall_time.then_some(elapsed),
    };
    outputs.add_json("manifest.json", &manifest);
    outputs.commit(&args.out.out)?;
    Ok(())
}

fn render(stats: &AggregateStats) -> OutputSet {
    let n = stats.config.n_points;
    let mut autocorr = CsvText::new(
        std::iter::once("order".to_string()).chain((0..n).map(|l| format!("lag_{l}"))),
    );
    let k_header = || std::iter::once("order".to_string()).chain((0..n).map(|k| format!("k_{k}")));
    let mut signature = CsvText::new(k_header());
    let mut corr_power = CsvText::new(k_header());
    let mut pct = CsvText::new(["order", "p05", "p50", "p95"]);
    for o in &stats.orders {
        autocorr.labelled_row(o.order, &o.mean_autocorr);
        signature.labelled_row(o.order, &o.mean_signature);
        corr_power.labelled_row(o.order, &o.mean_corr_power);
        let p = o.mlp_bracket_percentiles;
        pct.labelled_row(o.order, &[p.p05, p.p50, p.p95]);
    }
    let mut out = OutputSet::default();
    out.add("mean_autocorr.csv", autocorr.into_bytes());
    out.add("mean_signature.csv", signature.into_bytes());
    out.add("mean_corr_power.csv", corr_power.into_bytes());
    out.add("mlp_percentiles.csv", pct.into_bytes());
    out
}
