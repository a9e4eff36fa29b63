//! Cartesian sweeps over robot count, sensor range, speed, strategy and seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::output::format_float;
use crate::error::Result;
use crate::geometry::RobotConfiguration;
use crate::strategies::{run, sample_positions, SimulationRecord, StrategyKind};

/// One point of the (N, R, U) parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasePoint {
    pub n_robots: usize,
    pub range: Option<f64>,
    pub speed: f64,
}

impl CasePoint {
    /// `N.R.100U`, e.g. `20.4.50`. An unlimited range prints as `inf`.
    pub fn label(&self) -> String {
        let range = match self.range {
            Some(r) => format_float(r),
            None => "inf".to_string(),
        };
        let speed = self.speed * 100.0;
        let speed = if (speed - speed.round()).abs() < 1e-9 {
            format!("{}", speed.round() as i64)
        } else {
            format_float(speed)
        };
        format!("{}.{}.{}", self.n_robots, range, speed)
    }
}

/// One sweep cell and its outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub case: CasePoint,
    pub strategy: StrategyKind,
    pub seed: u64,
    pub result: std::result::Result<SimulationRecord, String>,
}

impl SweepCell {
    pub fn label(&self) -> String {
        self.case.label()
    }
}

fn digest_u64(parts: &[String]) -> u64 {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part.as_bytes());
        hasher.update([0u8]);
    }
    let bytes = hasher.finalize();
    u64::from_le_bytes(bytes[..8].try_into().expect("sha256 yields 32 bytes"))
}

fn case_parts(case: &CasePoint) -> [String; 3] {
    [
        case.n_robots.to_string(),
        case.range.map_or("inf".into(), |r| format!("{:016x}", r.to_bits())),
        format!("{:016x}", case.speed.to_bits()),
    ]
}

/// Seed for the initial positions. Independent of the strategy, so every
/// strategy in a sweep starts from the same configuration.
pub fn placement_seed(seed: u64, case: &CasePoint) -> u64 {
    let [n, r, u] = case_parts(case);
    digest_u64(&["placement".into(), seed.to_string(), n, r, u])
}

/// Seed for the run's own random stream.
pub fn run_seed(seed: u64, strategy: StrategyKind, case: &CasePoint) -> u64 {
    let [n, r, u] = case_parts(case);
    digest_u64(&["run".into(), seed.to_string(), strategy.name().into(), n, r, u])
}

/// Runs a single sweep cell.
pub fn run_cell(
    config: &ExperimentConfig,
    case: CasePoint,
    strategy: StrategyKind,
    seed: u64,
) -> Result<SimulationRecord> {
    let domain = config.domain;
    let model = config.sensor(case.range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(placement_seed(seed, &case));
    let positions = sample_positions(&domain, case.n_robots, &mut rng)?;
    let robots = RobotConfiguration {
        positions,
        speed: case.speed,
        max_speed: config.max_speed,
    };
    let spec = config.strategy_spec(strategy, run_seed(seed, strategy, &case));
    let field = config.density.build(domain)?;
    run(&domain, &robots, &model, &config.control, &spec, field)
}

/// Grid points in declaration order: robot count, then range, then speed.
pub fn case_points(config: &ExperimentConfig) -> Vec<CasePoint> {
    let mut points = Vec::new();
    for &n_robots in &config.n_robots {
        for &range in &config.ranges {
            for &speed in &config.speeds {
                points.push(CasePoint {
                    n_robots,
                    range,
                    speed,
                });
            }
        }
    }
    points
}

/// Runs every (case, strategy, seed) cell. Cells run in parallel but are
/// returned in a fixed order; a failing cell is recorded, not fatal.
pub fn run_sweep(config: &ExperimentConfig) -> Vec<SweepCell> {
    let mut jobs = Vec::new();
    for case in case_points(config) {
        for &strategy in &config.strategies {
            for &seed in &config.seeds {
                jobs.push((case, strategy, seed));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(case, strategy, seed)| SweepCell {
            case,
            strategy,
            seed,
            result: run_cell(config, case, strategy, seed).map_err(|e| e.to_string()),
        })
        .collect()
}

/// Per-(case, strategy) statistics over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub case_label: String,
    pub strategy: StrategyKind,
    pub runs: usize,
    pub failed: usize,
    pub median_steps: Option<f64>,
    pub min_steps: Option<usize>,
    pub max_steps: Option<usize>,
    pub median_searches: Option<f64>,
}

/// Median with the two middle values averaged for even counts.
pub fn median(values: &[usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid] as f64
    } else {
        (sorted[mid - 1] + sorted[mid]) as f64 / 2.0
    })
}

pub fn aggregate(cells: &[SweepCell]) -> Vec<Aggregate> {
    let mut groups: Vec<(String, StrategyKind, Vec<&SweepCell>)> = Vec::new();
    for cell in cells {
        let label = cell.label();
        match groups
            .iter_mut()
            .find(|(l, s, _)| *l == label && *s == cell.strategy)
        {
            Some((_, _, members)) => members.push(cell),
            None => groups.push((label, cell.strategy, vec![cell])),
        }
    }
    groups
        .into_iter()
        .map(|(case_label, strategy, members)| {
            let ok: Vec<&SimulationRecord> =
                members.iter().filter_map(|c| c.result.as_ref().ok()).collect();
            let steps: Vec<usize> = ok.iter().map(|r| r.steps_elapsed).collect();
            let searches: Vec<usize> = ok.iter().map(|r| r.searches_performed).collect();
            Aggregate {
                case_label,
                strategy,
                runs: members.len(),
                failed: members.len() - ok.len(),
                median_steps: median(&steps),
                min_steps: steps.iter().copied().min(),
                max_steps: steps.iter().copied().max(),
                median_searches: median(&searches),
            }
        })
        .collect()
}
