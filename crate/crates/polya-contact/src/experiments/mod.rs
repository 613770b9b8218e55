//! Experiment runners. Each replica draws from its own seeded stream, and
//! the same replica index reuses its graph or tree across the lambda grid,
//! so sweeps compare lambdas on common random inputs.

mod density;
mod escape;
mod lit;
mod simulate;
mod star;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use density::{run_density_experiment, run_lambda_sweep, DensityPoint, DensityReport, LambdaSweepReport, ObservedDensity};
pub use escape::{run_escape_sweep, EscapePoint, EscapeSweepReport};
pub use lit::{run_lit_transfer, seed_lit, LitRow, LitTransferReport};
pub use simulate::{parse_init, simulate_graph, RunSummary, SimulateReport, SimulateSpec};
pub use star::{censored_median, run_star_scaling, CensoredMedian, StarRow, StarScalingReport};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::Result;
use crate::fit::Estimate;
use crate::formats::write_text;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A serializable experiment result with a CSV view of its data.
pub trait Report: Serialize {
    fn stem(&self) -> &'static str;
    fn csv(&self) -> String;
}

/// Writes `<stem>.json` and `<stem>.csv` into `dir`.
pub fn write_report<R: Report>(dir: &Path, report: &R) -> Result<Vec<PathBuf>> {
    let json = dir.join(format!("{}.json", report.stem()));
    let csv = dir.join(format!("{}.csv", report.stem()));
    write_text(&json, &(serde_json::to_string_pretty(report)? + "\n"))?;
    write_text(&csv, &report.csv())?;
    Ok(vec![json, csv])
}

/// Runs the experiment named by `config.kind` and writes its outputs.
pub fn run_and_write(config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    match config.kind {
        ExperimentKind::Density => write_report(dir, &run_density_experiment(config)?),
        ExperimentKind::LambdaSweep => write_report(dir, &run_lambda_sweep(config)?),
        ExperimentKind::EscapeSweep => write_report(dir, &run_escape_sweep(config)?),
        ExperimentKind::StarScaling => write_report(dir, &run_star_scaling(config)?),
        ExperimentKind::LitTransfer => write_report(dir, &run_lit_transfer(config)?),
    }
}

/// Whether the means never drop by more than `k` pooled standard errors
/// from one point to the next.
pub fn non_decreasing_with_slack(points: &[Estimate], k: f64) -> bool {
    points.windows(2).all(|w| {
        let se = (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
        w[1].mean >= w[0].mean - k * se
    })
}
