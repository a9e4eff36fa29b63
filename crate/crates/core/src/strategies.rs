//! Discrete-time search strategies.
//!
//! Every strategy runs synchronously: each step recomputes the Voronoi
//! partition from the current positions, picks motion targets from the
//! current density, moves all robots, and (except during SDS deployment)
//! searches once at the new positions.
//!
//! | kind | motion target | search update |
//! |------|---------------|---------------|
//! | SDS  | centroid of own (restricted) cell, deploy until all robots arrive | min, only when deployed |
//! | CDS  | centroid of own (restricted) cell | min, every step |
//! | VGS  | centroid of the sensor disk | min, every step |
//! | TGS  | centroid of the sensor disk | product, every step |
//! | RS   | random heading | min, every step |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{integrate, ControlLaw, ControlParams};
use crate::error::{Error, Result};
use crate::field::{
    apply_search_min, apply_search_product, perceived_mass_centroid, sensed_cells, DensityField,
};
use crate::geometry::{clamp_to_domain, Domain, Point, RobotConfiguration, VoronoiPartition};
use crate::sensor::SensorModel;

/// Deployment steps without progress before SDS forces a search.
pub const DEADLOCK_STEPS: usize = 50;
/// Displacement below which an SDS deployment step counts as no progress.
pub const PROGRESS_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    Sds,
    Cds,
    Vgs,
    Tgs,
    Rs,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Cds,
        StrategyKind::Tgs,
        StrategyKind::Vgs,
        StrategyKind::Sds,
        StrategyKind::Rs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Sds => "SDS",
            StrategyKind::Cds => "CDS",
            StrategyKind::Vgs => "VGS",
            StrategyKind::Tgs => "TGS",
            StrategyKind::Rs => "RS",
        }
    }

    /// Greedy strategies steer toward the sensor disk and need a range.
    pub fn needs_range(self) -> bool {
        matches!(self, StrategyKind::Vgs | StrategyKind::Tgs)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "SDS" => Ok(StrategyKind::Sds),
            "CDS" => Ok(StrategyKind::Cds),
            "VGS" => Ok(StrategyKind::Vgs),
            "TGS" => Ok(StrategyKind::Tgs),
            "RS" => Ok(StrategyKind::Rs),
            _ => Err(format!("unknown strategy `{s}` (expected SDS, CDS, VGS, TGS or RS)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    /// Stop once the average uncertainty is at or below this value.
    pub epsilon: f64,
    pub max_steps: usize,
    pub rng_seed: u64,
    /// Law used by CDS, VGS and TGS.
    pub law: ControlLaw,
    /// Law used by SDS while deploying.
    pub deploy_law: ControlLaw,
}

impl StrategySpec {
    pub fn new(kind: StrategyKind) -> Self {
        StrategySpec {
            kind,
            epsilon: 0.002,
            max_steps: 2000,
            rng_seed: 0,
            law: ControlLaw::ConstantSpeed,
            deploy_law: ControlLaw::Saturated,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::validation("epsilon", format!("must be > 0, got {}", self.epsilon)));
        }
        if self.max_steps < 1 {
            return Err(Error::validation("max_steps", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Threshold,
    MaxSteps,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Threshold => "threshold",
            Termination::MaxSteps => "max_steps",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchEvent {
    /// 1-based step at which the search happened.
    pub step: usize,
    pub robots: Vec<usize>,
}

/// Everything a run produced. Index 0 of `avg_uncertainty` and
/// `searches_cumulative` is the initial state; entry `s` (and
/// `positions[s - 1]`) is the state after step `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRecord {
    pub kind: StrategyKind,
    pub initial_positions: Vec<Point>,
    pub positions: Vec<Vec<Point>>,
    pub avg_uncertainty: Vec<f64>,
    pub searches_cumulative: Vec<usize>,
    pub search_events: Vec<SearchEvent>,
    pub searches_performed: usize,
    pub steps_elapsed: usize,
    pub terminated_by: Termination,
    /// Steps at which SDS forced a search after stalling.
    pub forced_barriers: Vec<usize>,
}

impl SimulationRecord {
    pub fn final_uncertainty(&self) -> f64 {
        *self.avg_uncertainty.last().expect("history always has the initial entry")
    }
}

/// Mutable state of one run.
#[derive(Debug, Clone)]
pub struct SimulationState {
    domain: Domain,
    model: SensorModel,
    params: ControlParams,
    speed: f64,
    speed_cap: f64,
    spec: StrategySpec,
    positions: Vec<Point>,
    field: DensityField,
    rng: ChaCha8Rng,
    step: usize,
    searches: usize,
    stalled_deploy_steps: usize,
    events: Vec<SearchEvent>,
    forced: Vec<usize>,
}

impl SimulationState {
    pub fn new(
        domain: Domain,
        config: &RobotConfiguration,
        model: SensorModel,
        params: ControlParams,
        spec: StrategySpec,
        initial_field: DensityField,
    ) -> Result<Self> {
        config.validate(&domain)?;
        params.validate()?;
        spec.validate()?;
        if !(config.speed.is_finite() && config.speed > 0.0) {
            return Err(Error::validation("speed", format!("must be > 0, got {}", config.speed)));
        }
        if let Some(cap) = config.max_speed {
            if !(cap.is_finite() && cap > 0.0) {
                return Err(Error::validation("max_speed", format!("must be > 0, got {cap}")));
            }
        }
        if spec.kind.needs_range() && model.range().is_none() {
            return Err(Error::InvalidCombination(spec.kind.name().to_string()));
        }
        if initial_field.domain() != &domain {
            return Err(Error::validation("density", "field grid does not match the domain"));
        }
        Ok(SimulationState {
            domain,
            model,
            params,
            speed: config.speed,
            speed_cap: config.speed_cap(),
            spec,
            positions: config.positions.clone(),
            field: initial_field,
            rng: ChaCha8Rng::seed_from_u64(spec.rng_seed),
            step: 0,
            searches: 0,
            stalled_deploy_steps: 0,
            events: Vec::new(),
            forced: Vec::new(),
        })
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn field(&self) -> &DensityField {
        &self.field
    }

    pub fn steps_elapsed(&self) -> usize {
        self.step
    }

    pub fn searches_performed(&self) -> usize {
        self.searches
    }

    /// Advances one step with the configured strategy.
    pub fn step(&mut self) -> Result<()> {
        match self.spec.kind {
            StrategyKind::Sds => self.step_sds(),
            StrategyKind::Cds => self.step_cds(),
            StrategyKind::Vgs => self.step_vgs(),
            StrategyKind::Tgs => self.step_tgs(),
            StrategyKind::Rs => self.step_rs(),
        }
    }

    /// Perceived centroid of each robot's own (range-restricted) Voronoi cell.
    fn cell_targets(&self) -> Vec<Option<Point>> {
        let partition = VoronoiPartition::from_sites(&self.positions, &self.domain);
        (0..self.positions.len())
            .map(|i| {
                let p = self.positions[i];
                let cells = sensed_cells(&partition, &self.domain, &self.model, i, p);
                perceived_mass_centroid(&self.field, &cells, &self.model, p).centroid
            })
            .collect()
    }

    /// Perceived centroid of each robot's full sensor disk, ignoring ownership.
    fn disk_targets(&self) -> Result<Vec<Option<Point>>> {
        let range = self.model.require_range()?;
        Ok(self
            .positions
            .iter()
            .map(|&p| {
                let cells = self.domain.cells_within(p, range);
                perceived_mass_centroid(&self.field, &cells, &self.model, p).centroid
            })
            .collect())
    }

    /// Moves robots toward their targets, skipping those whose target is
    /// missing or closer than half a step.
    fn chase(&mut self, targets: &[Option<Point>]) {
        let law_speed = match self.spec.law {
            ControlLaw::Saturated => self.speed_cap,
            _ => self.speed,
        };
        let gate = 0.5 * self.speed;
        for (p, target) in self.positions.iter_mut().zip(targets) {
            let Some(c) = *target else { continue };
            if p.distance(c) < gate {
                continue;
            }
            let v = self.spec.law.velocity(*p, c, &self.params, law_speed);
            *p = integrate(*p, v, &self.params, &self.domain);
        }
    }

    fn search_min(&mut self) {
        let partition = VoronoiPartition::from_sites(&self.positions, &self.domain);
        self.field = apply_search_min(&self.field, &self.positions, &self.model, &partition);
        self.record_search();
    }

    fn record_search(&mut self) {
        self.searches += 1;
        self.events.push(SearchEvent {
            step: self.step,
            robots: (0..self.positions.len()).collect(),
        });
    }

    /// Combined deploy and search: chase instantaneous centroids, search every step.
    pub fn step_cds(&mut self) -> Result<()> {
        self.step += 1;
        let targets = self.cell_targets();
        self.chase(&targets);
        self.search_min();
        Ok(())
    }

    /// Sequential deploy and search.
    ///
    /// A step either deploys (every robot moves toward its centroid, landing
    /// on it when it is within one step) or, once every robot is within
    /// `d_tol` of its centroid, searches in place. Consecutive searches
    /// happen whenever the post-search centroids are still within `d_tol`.
    pub fn step_sds(&mut self) -> Result<()> {
        self.step += 1;
        let targets = self.cell_targets();
        let deployed = self
            .positions
            .iter()
            .zip(&targets)
            .all(|(p, t)| t.is_none_or(|c| p.distance(c) <= self.params.d_tol));
        let stalled = self.stalled_deploy_steps >= DEADLOCK_STEPS;
        if deployed || stalled {
            if !deployed {
                self.forced.push(self.step);
            }
            self.stalled_deploy_steps = 0;
            self.search_min();
            return Ok(());
        }

        let cap = self.speed_cap;
        let mut progress: f64 = 0.0;
        for (p, target) in self.positions.iter_mut().zip(&targets) {
            let Some(c) = *target else { continue };
            let next = if p.distance(c) <= cap {
                clamp_to_domain(c, &self.domain)
            } else {
                let v = self.spec.deploy_law.velocity(*p, c, &self.params, cap);
                integrate(*p, v, &self.params, &self.domain)
            };
            progress = progress.max(next.distance(*p));
            *p = next;
        }
        if progress <= PROGRESS_EPSILON {
            self.stalled_deploy_steps += 1;
        } else {
            self.stalled_deploy_steps = 0;
        }
        Ok(())
    }

    /// Voronoi greedy search: greedy motion, cooperative search.
    pub fn step_vgs(&mut self) -> Result<()> {
        let targets = self.disk_targets()?;
        self.step += 1;
        self.chase(&targets);
        self.search_min();
        Ok(())
    }

    /// True greedy search: greedy motion, every in-range robot searches every cell.
    pub fn step_tgs(&mut self) -> Result<()> {
        let targets = self.disk_targets()?;
        self.step += 1;
        self.chase(&targets);
        self.field = apply_search_product(&self.field, &self.positions, &self.model)?;
        self.record_search();
        Ok(())
    }

    /// Random search: uniform one-degree headings at constant speed.
    pub fn step_rs(&mut self) -> Result<()> {
        self.step += 1;
        for p in self.positions.iter_mut() {
            let heading = random_heading(&mut self.rng);
            let v = Point::new(heading.cos(), heading.sin()) * self.speed;
            *p = clamp_to_domain(*p + v, &self.domain);
        }
        self.search_min();
        Ok(())
    }
}

/// Uniform draw over the 360 one-degree heading bins, in radians.
pub fn random_heading(rng: &mut impl Rng) -> f64 {
    (rng.random_range(0..360u32) as f64).to_radians()
}

/// Samples `n` uniform positions, rejecting any closer than one grid spacing
/// to an earlier robot.
pub fn sample_positions(domain: &Domain, n: usize, rng: &mut impl Rng) -> Result<Vec<Point>> {
    const MAX_ATTEMPTS: usize = 100_000;
    let min_gap = domain.grid_spacing();
    let mut positions: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0;
    while positions.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::validation(
                "n_robots",
                format!("could not place {n} robots at least {min_gap} apart"),
            ));
        }
        let p = Point::new(
            rng.random_range(0.0..domain.width()),
            rng.random_range(0.0..domain.height()),
        );
        if positions.iter().all(|q| q.distance(p) > min_gap) {
            positions.push(p);
        }
    }
    Ok(positions)
}

/// Runs a strategy until the average uncertainty drops to `spec.epsilon` or
/// `spec.max_steps` steps have elapsed.
pub fn run(
    domain: &Domain,
    config: &RobotConfiguration,
    model: &SensorModel,
    params: &ControlParams,
    spec: &StrategySpec,
    initial_field: DensityField,
) -> Result<SimulationRecord> {
    let mut state = SimulationState::new(*domain, config, *model, *params, *spec, initial_field)?;
    let mut positions = Vec::new();
    let mut avg = vec![state.field.average_uncertainty()];
    let mut searches = vec![0];
    let terminated_by = loop {
        if *avg.last().unwrap() <= spec.epsilon {
            break Termination::Threshold;
        }
        if state.step >= spec.max_steps {
            break Termination::MaxSteps;
        }
        state.step()?;
        positions.push(state.positions.clone());
        avg.push(state.field.average_uncertainty());
        searches.push(state.searches);
    };
    Ok(SimulationRecord {
        kind: spec.kind,
        initial_positions: config.positions.clone(),
        positions,
        avg_uncertainty: avg,
        searches_cumulative: searches,
        search_events: state.events,
        searches_performed: state.searches,
        steps_elapsed: state.step,
        terminated_by,
        forced_barriers: state.forced,
    })
}
