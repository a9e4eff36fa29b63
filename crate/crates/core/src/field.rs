//! Uncertainty density on the grid: search updates, perceived mass and
//! centroid, the one-step objective and its gradient.
//!
//! All integrals are midpoint sums over cell centers weighted by the cell
//! area, accumulated in ascending cell order so results are bit-stable.

use crate::error::{Error, Result};
use crate::geometry::{restrict_cell, Domain, Point, VoronoiPartition};
use crate::sensor::{Detection, SensorModel};

/// Regions with less perceived mass than this have no centroid.
pub const MASS_EPSILON: f64 = 1e-12;

/// A Gaussian bump used to build non-uniform initial densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: Point,
    pub sigma: f64,
    pub amplitude: f64,
}

/// Gridded uncertainty density with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    domain: Domain,
    values: Vec<f64>,
}

impl DensityField {
    pub fn uniform(domain: Domain, value: f64) -> Result<Self> {
        DensityField::from_values(domain, vec![value; domain.num_cells()])
    }

    pub fn from_values(domain: Domain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.num_cells() {
            return Err(Error::validation(
                "density",
                format!("expected {} cells, got {}", domain.num_cells(), values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::validation("density", format!("value {v} outside [0, 1]")));
        }
        Ok(DensityField { domain, values })
    }

    /// Sum of Gaussian bumps, clipped to `[0, 1]`.
    pub fn from_bumps(domain: Domain, bumps: &[Bump]) -> Result<Self> {
        for b in bumps {
            if !(b.sigma > 0.0) {
                return Err(Error::validation("density", "bump sigma must be > 0"));
            }
            if !(b.amplitude >= 0.0) {
                return Err(Error::validation("density", "bump amplitude must be >= 0"));
            }
        }
        let values = domain
            .cell_centers()
            .map(|q| {
                let v: f64 = bumps
                    .iter()
                    .map(|b| {
                        b.amplitude * (-q.distance_squared(b.center) / (2.0 * b.sigma * b.sigma)).exp()
                    })
                    .sum();
                v.clamp(0.0, 1.0)
            })
            .collect();
        Ok(DensityField { domain, values })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    /// Integral of the density over the domain.
    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.domain.cell_area()
    }

    /// Integral of the density divided by the domain area.
    pub fn average_uncertainty(&self) -> f64 {
        // cell areas are equal, so this is the plain mean of the cell values
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    fn map_cells(&self, mut factor: impl FnMut(usize, Point) -> f64) -> DensityField {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(c, &v)| v * factor(c, self.domain.cell_center(c)))
            .collect();
        DensityField {
            domain: self.domain,
            values,
        }
    }
}

/// Cooperative search: each cell is reduced only by its Voronoi owner, which
/// is the minimum-factor robot because the factor grows with distance.
pub fn apply_search_min(
    field: &DensityField,
    positions: &[Point],
    model: &SensorModel,
    partition: &VoronoiPartition,
) -> DensityField {
    field.map_cells(|c, q| model.search_factor(q.distance(positions[partition.owner(c)])))
}

/// Duplicated search: every robot within range of a cell reduces it.
pub fn apply_search_product(
    field: &DensityField,
    positions: &[Point],
    model: &SensorModel,
) -> Result<DensityField> {
    let range = model.require_range()?;
    Ok(field.map_cells(|_, q| {
        positions
            .iter()
            .map(|p| q.distance(*p))
            .filter(|&r| r <= range)
            .map(|r| model.search_factor(r))
            .product()
    }))
}

/// Mass and centroid of a region under the perceived density
/// `phi(q) k exp(-alpha |p - q|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassCentroid {
    pub mass: f64,
    pub centroid: Option<Point>,
}

impl MassCentroid {
    pub fn defined(&self) -> bool {
        self.centroid.is_some()
    }
}

pub fn perceived_mass_centroid(
    field: &DensityField,
    cells: &[usize],
    model: &SensorModel,
    position: Point,
) -> MassCentroid {
    let domain = field.domain();
    let area = domain.cell_area();
    let mut mass = 0.0;
    let mut moment = Point::ZERO;
    for &c in cells {
        let q = domain.cell_center(c);
        let w = field.value(c) * model.perceived_weight_sq(q.distance_squared(position)) * area;
        mass += w;
        moment += q * w;
    }
    let centroid = (mass >= MASS_EPSILON).then(|| moment * (1.0 / mass));
    MassCentroid { mass, centroid }
}

/// Cells robot `i` senses within its own Voronoi cell: the full cell, or the
/// part within sensor range.
pub fn sensed_cells(
    partition: &VoronoiPartition,
    domain: &Domain,
    model: &SensorModel,
    i: usize,
    position: Point,
) -> Vec<usize> {
    match model.range() {
        Some(r) => restrict_cell(partition, domain, i, position, r).cells().to_vec(),
        None => partition.cells_of(i).to_vec(),
    }
}

/// One-step uncertainty mass removed by a cooperative search at `positions`.
pub fn objective(
    field: &DensityField,
    positions: &[Point],
    partition: &VoronoiPartition,
    model: &SensorModel,
) -> f64 {
    let domain = field.domain();
    let mut total = 0.0;
    for (c, &phi) in field.values().iter().enumerate() {
        let p = positions[partition.owner(c)];
        total += phi * model.effectiveness_unchecked(domain.cell_center(c).distance(p));
    }
    total * domain.cell_area()
}

/// Objective under an explicit range-limited detection function, integrated
/// over whole Voronoi cells.
pub fn objective_with(
    field: &DensityField,
    positions: &[Point],
    partition: &VoronoiPartition,
    model: &SensorModel,
    detection: Detection,
) -> Result<f64> {
    let domain = field.domain();
    let mut total = 0.0;
    for (c, &phi) in field.values().iter().enumerate() {
        let r = domain.cell_center(c).distance(positions[partition.owner(c)]);
        total += phi * model.detection_complement(detection, r)?;
    }
    Ok(total * domain.cell_area())
}

/// Gradient of [`objective`] with respect to robot `i`'s position,
/// `-2 alpha M (p_i - C)` over the (range-restricted) cell. Zero when the
/// perceived mass vanishes.
pub fn objective_gradient(
    field: &DensityField,
    positions: &[Point],
    partition: &VoronoiPartition,
    model: &SensorModel,
    i: usize,
) -> Point {
    let p = positions[i];
    let cells = sensed_cells(partition, field.domain(), model, i, p);
    let mc = perceived_mass_centroid(field, &cells, model, p);
    match mc.centroid {
        Some(centroid) => (p - centroid) * (-2.0 * model.alpha() * mc.mass),
        None => Point::ZERO,
    }
}

/// Gradient of [`objective_with`] by direct quadrature of the derivative of
/// the detection function, without going through the centroid.
pub fn gradient_with(
    field: &DensityField,
    positions: &[Point],
    partition: &VoronoiPartition,
    model: &SensorModel,
    i: usize,
    detection: Detection,
) -> Result<Point> {
    let domain = field.domain();
    let p = positions[i];
    let mut grad = Point::ZERO;
    for &c in partition.cells_of(i) {
        let offset = p - domain.cell_center(c);
        let r = offset.norm();
        if r == 0.0 {
            continue;
        }
        let slope = model.detection_slope(detection, r)?;
        grad += offset * (-field.value(c) * slope / r);
    }
    Ok(grad * domain.cell_area())
}
