//! Experiment harness: configuration parsing, seeded sweeps and CSV output.

mod config;
mod output;
mod sweep;

pub use config::{parse_config, DensitySpec, ExperimentConfig};
pub use output::{
    aggregate_csv, emit_outputs, format_float, history_csv, run_stem, summary_csv, trajectory_csv,
    AGGREGATE_HEADER, HISTORY_HEADER, SUMMARY_HEADER, TRAJECTORY_HEADER,
};
pub use sweep::{
    aggregate, case_points, median, placement_seed, run_cell, run_seed, run_sweep, Aggregate,
    CasePoint, SweepCell,
};

use crate::strategies::StrategyKind;

/// Runs the first grid point of `config` as a single cell, optionally
/// overriding the seed and strategy.
pub fn run_single(
    config: &ExperimentConfig,
    seed: Option<u64>,
    strategy: Option<StrategyKind>,
) -> crate::Result<SweepCell> {
    let case = case_points(config)[0];
    let strategy = strategy.unwrap_or(config.strategies[0]);
    let seed = seed.unwrap_or(config.seeds[0]);
    let record = run_cell(config, case, strategy, seed)?;
    Ok(SweepCell {
        case,
        strategy,
        seed,
        result: Ok(record),
    })
}
