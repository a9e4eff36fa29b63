//! CSV writers. All numbers go through [`format_float`] so output files are
//! byte-identical across runs with the same configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sweep::{aggregate, SweepCell};
use crate::error::{Error, Result};
use crate::strategies::{SimulationRecord, StrategyKind};

pub const TRAJECTORY_HEADER: &str = "step,robot,x,y";
pub const HISTORY_HEADER: &str = "step,avg_uncertainty,searches_cumulative";
pub const SUMMARY_HEADER: &str =
    "case_label,strategy,seed,steps,searches,elapsed_equivalent,terminated_by";
pub const AGGREGATE_HEADER: &str =
    "case_label,strategy,runs,failed,median_steps,min_steps,max_steps,median_searches";

/// Nine significant digits; scientific notation only for `|x| < 1e-4` or
/// `|x| >= 1e9`. Trailing zeros are dropped.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let magnitude = x.abs();
    if !(1e-4..1e9).contains(&magnitude) {
        return format!("{x:.8e}");
    }
    let exponent = magnitude.log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').len());
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

pub fn trajectory_csv(record: &SimulationRecord) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for (idx, positions) in record.positions.iter().enumerate() {
        for (robot, p) in positions.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                idx + 1,
                robot,
                format_float(p.x),
                format_float(p.y)
            );
        }
    }
    out
}

pub fn history_csv(record: &SimulationRecord) -> String {
    let mut out = String::from(HISTORY_HEADER);
    out.push('\n');
    for (step, (avg, searches)) in record
        .avg_uncertainty
        .iter()
        .zip(&record.searches_cumulative)
        .enumerate()
    {
        let _ = writeln!(out, "{},{},{}", step, format_float(*avg), searches);
    }
    out
}

fn summary_row(out: &mut String, label: &str, strategy: StrategyKind, seed: u64, cell: Option<&SimulationRecord>) {
    match cell {
        Some(r) => {
            let elapsed = match strategy {
                StrategyKind::Sds => r.steps_elapsed,
                _ => r.searches_performed,
            };
            let _ = writeln!(
                out,
                "{label},{strategy},{seed},{},{},{elapsed},{}",
                r.steps_elapsed,
                r.searches_performed,
                r.terminated_by.name()
            );
        }
        None => {
            let _ = writeln!(out, "{label},{strategy},{seed},,,,failed");
        }
    }
}

pub fn summary_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for cell in cells {
        summary_row(&mut out, &cell.label(), cell.strategy, cell.seed, cell.result.as_ref().ok());
    }
    out
}

pub fn aggregate_csv(cells: &[SweepCell]) -> String {
    let opt_f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    let opt_u = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for a in aggregate(cells) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            a.case_label,
            a.strategy,
            a.runs,
            a.failed,
            opt_f(a.median_steps),
            opt_u(a.min_steps),
            opt_u(a.max_steps),
            opt_f(a.median_searches)
        );
    }
    out
}

/// File stem shared by a cell's trajectory and history files.
pub fn run_stem(cell: &SweepCell) -> String {
    format!("{}_{}_s{}", cell.label(), cell.strategy, cell.seed)
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(path)
}

/// Writes `summary.csv`, `aggregate.csv` and, for each successful cell,
/// `runs/<label>_<strategy>_s<seed>_{trajectory,history}.csv` under `dir`.
/// Returns the written paths in a fixed order.
pub fn emit_outputs(cells: &[SweepCell], dir: &Path) -> Result<Vec<PathBuf>> {
    let runs = dir.join("runs");
    fs::create_dir_all(&runs).map_err(|e| Error::Io {
        path: runs.display().to_string(),
        message: e.to_string(),
    })?;
    let mut written = Vec::new();
    for cell in cells {
        if let Ok(record) = &cell.result {
            let stem = run_stem(cell);
            written.push(write(runs.join(format!("{stem}_trajectory.csv")), &trajectory_csv(record))?);
            written.push(write(runs.join(format!("{stem}_history.csv")), &history_csv(record))?);
        }
    }
    written.push(write(dir.join("summary.csv"), &summary_csv(cells))?);
    written.push(write(dir.join("aggregate.csv"), &aggregate_csv(cells))?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(10.0), "10");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333");
        assert_eq!(format_float(2.0 / 3.0 * 100.0), "66.6666667");
        assert_eq!(format_float(123456789.4), "123456789");
        assert_eq!(format_float(9.9999999999), "10");
        assert_eq!(format_float(0.00012345678912), "0.000123456789");
        assert_eq!(format_float(0.000012345), "1.23450000e-5");
        assert_eq!(format_float(-2.5e9), "-2.50000000e9");
        assert_eq!(format_float(-7.25), "-7.25");
    }
}
