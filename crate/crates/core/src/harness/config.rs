//! Line-oriented experiment configuration.
//!
//! ```text
//! # twenty robots, range 4, speed 0.5
//! [domain]
//! width = 10
//! height = 10
//! grid_nx = 100
//! grid_ny = 100
//! density = uniform            # or: bumps 2,3,1,0.8; 7,7,1.5,1
//!
//! [sensor]
//! k = 0.5
//! alpha = 0.5
//! range = 4                    # comma list sweeps; `none` disables the limit
//!
//! [robots]
//! n_robots = 20                # comma list sweeps
//! speed = 0.5                  # comma list sweeps
//!
//! [strategy]
//! kind = CDS, TGS, VGS, SDS, RS
//! epsilon = 0.002
//! max_steps = 2000
//! seeds = 1, 2, 3
//!
//! [control]
//! k_prop = 1
//! delta = 0.3
//! d_tol = 0.3
//! heading_quantum = 1
//! law = constant_speed
//! deploy_law = saturated
//!
//! [output]
//! dir = out
//! ```

use std::collections::HashSet;
use std::path::PathBuf;

use crate::control::{ControlLaw, ControlParams};
use crate::error::{Error, Result};
use crate::field::{Bump, DensityField};
use crate::geometry::{Domain, Point};
use crate::sensor::SensorModel;
use crate::strategies::{StrategyKind, StrategySpec};

const MAX_BUMPS: usize = 4;

const SECTIONS: &[(&str, &[&str])] = &[
    ("domain", &["width", "height", "grid_nx", "grid_ny", "density"]),
    ("sensor", &["k", "alpha", "range"]),
    ("robots", &["n_robots", "speed", "max_speed"]),
    ("strategy", &["kind", "epsilon", "max_steps", "seeds"]),
    (
        "control",
        &["k_prop", "delta", "d_tol", "heading_quantum", "law", "deploy_law"],
    ),
    ("output", &["dir"]),
];

/// Initial uncertainty density.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    Uniform,
    Bumps(Vec<Bump>),
}

impl DensitySpec {
    pub fn build(&self, domain: Domain) -> Result<DensityField> {
        match self {
            DensitySpec::Uniform => DensityField::uniform(domain, 1.0),
            DensitySpec::Bumps(bumps) => DensityField::from_bumps(domain, bumps),
        }
    }
}

/// A fully validated experiment description. The robot count, sensor range,
/// speed, strategy and seed lists are sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub density: DensitySpec,
    pub k: f64,
    pub alpha: f64,
    pub ranges: Vec<Option<f64>>,
    pub n_robots: Vec<usize>,
    pub speeds: Vec<f64>,
    pub max_speed: Option<f64>,
    pub strategies: Vec<StrategyKind>,
    pub epsilon: f64,
    pub max_steps: usize,
    pub seeds: Vec<u64>,
    pub control: ControlParams,
    pub law: ControlLaw,
    pub deploy_law: ControlLaw,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let spec = StrategySpec::new(StrategyKind::Cds);
        ExperimentConfig {
            domain: Domain::default(),
            density: DensitySpec::Uniform,
            k: 0.5,
            alpha: 0.5,
            ranges: vec![None],
            n_robots: vec![5],
            speeds: vec![0.5],
            max_speed: None,
            strategies: vec![StrategyKind::Cds],
            epsilon: spec.epsilon,
            max_steps: spec.max_steps,
            seeds: vec![0],
            control: ControlParams::default(),
            law: spec.law,
            deploy_law: spec.deploy_law,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Sensor model for one value of the range axis.
    pub fn sensor(&self, range: Option<f64>) -> Result<SensorModel> {
        SensorModel::new(self.k, self.alpha, range)
    }

    pub fn strategy_spec(&self, kind: StrategyKind, rng_seed: u64) -> StrategySpec {
        StrategySpec {
            kind,
            epsilon: self.epsilon,
            max_steps: self.max_steps,
            rng_seed,
            law: self.law,
            deploy_law: self.deploy_law,
        }
    }

    fn validate(&self) -> Result<()> {
        for &range in &self.ranges {
            self.sensor(range)?;
        }
        if let Some(&n) = self.n_robots.iter().find(|&&n| n < 1) {
            return Err(Error::validation("n_robots", format!("must be >= 1, got {n}")));
        }
        if let Some(&u) = self.speeds.iter().find(|&&u| !(u.is_finite() && u > 0.0)) {
            return Err(Error::validation("speed", format!("must be > 0, got {u}")));
        }
        if let Some(cap) = self.max_speed {
            if !(cap.is_finite() && cap > 0.0) {
                return Err(Error::validation("max_speed", format!("must be > 0, got {cap}")));
            }
        }
        for (field, empty) in [
            ("range", self.ranges.is_empty()),
            ("n_robots", self.n_robots.is_empty()),
            ("speed", self.speeds.is_empty()),
            ("kind", self.strategies.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(Error::validation(field, "needs at least one value"));
            }
        }
        self.control.validate()?;
        self.strategy_spec(self.strategies[0], 0).validate()?;
        if let DensitySpec::Bumps(bumps) = &self.density {
            if bumps.is_empty() || bumps.len() > MAX_BUMPS {
                return Err(Error::validation(
                    "density",
                    format!("expected 1 to {MAX_BUMPS} bumps, got {}", bumps.len()),
                ));
            }
            for b in bumps {
                if !(b.sigma > 0.0) || !(b.amplitude >= 0.0) {
                    return Err(Error::validation(
                        "density",
                        "bump sigma must be > 0 and amplitude >= 0",
                    ));
                }
            }
        }
        Ok(())
    }
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

/// Parses and validates a configuration document; absent keys take defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let entries = tokenize(text)?;
    let mut cfg = ExperimentConfig::default();
    let (mut width, mut height) = (cfg.domain.width(), cfg.domain.height());
    let (mut nx, mut ny) = (cfg.domain.grid_nx(), cfg.domain.grid_ny());

    for Entry { line, key, value } in &entries {
        let line = *line;
        let v = value.as_str();
        match key.as_str() {
            "width" => width = number(line, key, v)?,
            "height" => height = number(line, key, v)?,
            "grid_nx" => nx = integer(line, key, v)?,
            "grid_ny" => ny = integer(line, key, v)?,
            "density" => cfg.density = density(line, v)?,
            "k" => cfg.k = number(line, key, v)?,
            "alpha" => cfg.alpha = number(line, key, v)?,
            "range" => cfg.ranges = list(line, key, v, range_value)?,
            "n_robots" => cfg.n_robots = list(line, key, v, integer)?,
            "speed" => cfg.speeds = list(line, key, v, number)?,
            "max_speed" => cfg.max_speed = range_value(line, key, v)?,
            "kind" => {
                cfg.strategies = list(line, key, v, |line, key, s| {
                    s.parse().map_err(|m| parse_error(line, key, m))
                })?
            }
            "epsilon" => cfg.epsilon = number(line, key, v)?,
            "max_steps" => cfg.max_steps = integer(line, key, v)?,
            "seeds" => cfg.seeds = list(line, key, v, integer)?,
            "k_prop" => cfg.control.k_prop = number(line, key, v)?,
            "delta" => cfg.control.delta = number(line, key, v)?,
            "d_tol" => cfg.control.d_tol = number(line, key, v)?,
            "heading_quantum" => cfg.control.heading_quantum = number(line, key, v)?,
            "law" => cfg.law = v.parse().map_err(|m| parse_error(line, key, m))?,
            "deploy_law" => cfg.deploy_law = v.parse().map_err(|m| parse_error(line, key, m))?,
            "dir" => cfg.output_dir = PathBuf::from(v),
            _ => unreachable!("tokenize only yields known keys"),
        }
    }
    cfg.domain = Domain::new(width, height, nx, ny)?;
    cfg.validate()?;
    Ok(cfg)
}

fn parse_error(line: usize, key: &str, message: impl std::fmt::Display) -> Error {
    Error::Parse {
        line,
        message: format!("`{key}`: {message}"),
    }
}

fn tokenize(text: &str) -> Result<Vec<Entry>> {
    let mut section: Option<&'static [&'static str]> = None;
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                line,
                message: format!("malformed section header `{content}`"),
            })?;
            let name = name.trim();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|(s, _)| *s == name)
                    .map(|(_, keys)| *keys)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("unknown section `[{name}]`"),
                    })?,
            );
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let keys = section.ok_or_else(|| parse_error(line, key, "key appears before any section"))?;
        if !keys.contains(&key) {
            return Err(parse_error(line, key, "unknown key in this section"));
        }
        if !seen.insert(key.to_string()) {
            return Err(parse_error(line, key, "duplicate key"));
        }
        if value.is_empty() {
            return Err(parse_error(line, key, "missing value"));
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(entries)
}

fn number(line: usize, key: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| parse_error(line, key, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, key, format!("`{s}` is not finite")));
    }
    Ok(v)
}

fn integer<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_error(line, key, format!("`{s}` is not a non-negative integer")))
}

fn range_value(line: usize, key: &str, s: &str) -> Result<Option<f64>> {
    match s {
        "none" | "inf" => Ok(None),
        _ => number(line, key, s).map(Some),
    }
}

fn list<T>(
    line: usize,
    key: &str,
    s: &str,
    item: impl Fn(usize, &str, &str) -> Result<T>,
) -> Result<Vec<T>> {
    s.split(',').map(|part| item(line, key, part.trim())).collect()
}

/// `uniform` or `bumps x,y,sigma,amplitude; ...`.
fn density(line: usize, s: &str) -> Result<DensitySpec> {
    if s == "uniform" {
        return Ok(DensitySpec::Uniform);
    }
    let rest = s
        .strip_prefix("bumps")
        .ok_or_else(|| parse_error(line, "density", format!("expected `uniform` or `bumps ...`, got `{s}`")))?;
    let bumps = rest
        .split(';')
        .map(|tuple| {
            let parts = list(line, "density", tuple.trim(), number)?;
            match parts[..] {
                [x, y, sigma, amplitude] => Ok(Bump {
                    center: Point::new(x, y),
                    sigma,
                    amplitude,
                }),
                _ => Err(parse_error(
                    line,
                    "density",
                    format!("bump `{}` needs 4 values x,y,sigma,amplitude", tuple.trim()),
                )),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensitySpec::Bumps(bumps))
}
