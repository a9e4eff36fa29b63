//! Gridded search domain, Voronoi partition over grid cells, and the
//! sensor-range restriction of a robot's cell.
//!
//! The rectangle `[0, width] x [0, height]` is split into `grid_nx * grid_ny`
//! uniform cells. Every integral over the domain is a midpoint-rule sum over
//! cell centers, so the partition only needs to assign cell centers to their
//! nearest robot. Cell `c` sits at column `c % grid_nx` and row `c / grid_nx`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Robots closer than this are treated as coincident.
pub const DUPLICATE_TOLERANCE: f64 = 1e-9;

/// A planar point or vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ZERO: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn distance_squared(self, other: Point) -> f64 {
        (self - other).norm_squared()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, rhs: Point) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Rectangular search domain discretized into a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    width: f64,
    height: f64,
    grid_nx: usize,
    grid_ny: usize,
}

impl Default for Domain {
    /// 10 x 10 square on a 100 x 100 grid.
    fn default() -> Self {
        Domain {
            width: 10.0,
            height: 10.0,
            grid_nx: 100,
            grid_ny: 100,
        }
    }
}

impl Domain {
    pub fn new(width: f64, height: f64, grid_nx: usize, grid_ny: usize) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::validation("width", format!("must be > 0, got {width}")));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::validation("height", format!("must be > 0, got {height}")));
        }
        if grid_nx < 2 {
            return Err(Error::validation("grid_nx", format!("must be >= 2, got {grid_nx}")));
        }
        if grid_ny < 2 {
            return Err(Error::validation("grid_ny", format!("must be >= 2, got {grid_ny}")));
        }
        Ok(Domain {
            width,
            height,
            grid_nx,
            grid_ny,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn grid_nx(&self) -> usize {
        self.grid_nx
    }

    pub fn grid_ny(&self) -> usize {
        self.grid_ny
    }

    pub fn num_cells(&self) -> usize {
        self.grid_nx * self.grid_ny
    }

    pub fn cell_width(&self) -> f64 {
        self.width / self.grid_nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.height / self.grid_ny as f64
    }

    /// Larger of the two cell side lengths.
    pub fn grid_spacing(&self) -> f64 {
        self.cell_width().max(self.cell_height())
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_width() * self.cell_height()
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Largest distance between two points of the domain.
    pub fn diameter(&self) -> f64 {
        self.width.hypot(self.height)
    }

    pub fn cell_center(&self, cell: usize) -> Point {
        let col = cell % self.grid_nx;
        let row = cell / self.grid_nx;
        Point::new(
            (col as f64 + 0.5) * self.cell_width(),
            (row as f64 + 0.5) * self.cell_height(),
        )
    }

    /// All cell centers in cell-index order.
    pub fn cell_centers(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.num_cells()).map(move |c| self.cell_center(c))
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    /// Grid cells whose centers lie within `radius` of `center`, ascending.
    pub fn cells_within(&self, center: Point, radius: f64) -> Vec<usize> {
        let (cw, ch) = (self.cell_width(), self.cell_height());
        let col_range = index_range(center.x - radius, center.x + radius, cw, self.grid_nx);
        let row_range = index_range(center.y - radius, center.y + radius, ch, self.grid_ny);
        let r2 = radius * radius;
        let mut cells = Vec::new();
        for row in row_range {
            for col in col_range.clone() {
                let cell = row * self.grid_nx + col;
                if self.cell_center(cell).distance_squared(center) <= r2 {
                    cells.push(cell);
                }
            }
        }
        cells
    }
}

// Columns whose centers may fall in [lo, hi]; callers still test exact distance.
fn index_range(lo: f64, hi: f64, spacing: f64, n: usize) -> std::ops::Range<usize> {
    let first = ((lo / spacing - 0.5).floor().max(0.0)) as usize;
    let last = ((hi / spacing - 0.5).ceil() + 1.0).clamp(0.0, n as f64) as usize;
    first.min(n)..last
}

/// Clamps `p` coordinate-wise into the domain rectangle.
pub fn clamp_to_domain(p: Point, domain: &Domain) -> Point {
    Point::new(p.x.clamp(0.0, domain.width), p.y.clamp(0.0, domain.height))
}

/// Robot positions plus the motion limits shared by the team.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfiguration {
    pub positions: Vec<Point>,
    /// Constant travel speed `U`, in length units per step.
    pub speed: f64,
    /// Optional hard speed cap `U_max`; the saturated law falls back to `speed`.
    pub max_speed: Option<f64>,
}

impl RobotConfiguration {
    pub fn new(positions: Vec<Point>, speed: f64) -> Self {
        RobotConfiguration {
            positions,
            speed,
            max_speed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Speed cap used by the saturated law.
    pub fn speed_cap(&self) -> f64 {
        self.max_speed.unwrap_or(self.speed)
    }

    /// Checks N >= 1, containment and pairwise distinctness.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        if self.positions.is_empty() {
            return Err(Error::validation("n_robots", "must be >= 1"));
        }
        for (index, p) in self.positions.iter().enumerate() {
            if !p.is_finite() || !domain.contains(*p) {
                return Err(Error::OutOfDomain {
                    index,
                    x: p.x,
                    y: p.y,
                });
            }
        }
        for (i, a) in self.positions.iter().enumerate() {
            for (j, b) in self.positions.iter().enumerate().skip(i + 1) {
                let distance = a.distance(*b);
                if distance <= DUPLICATE_TOLERANCE {
                    return Err(Error::DuplicatePositions {
                        first: i,
                        second: j,
                        distance,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Assignment of every grid cell to its nearest robot, plus the Delaunay
/// neighbor graph read off the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiPartition {
    owner: Vec<usize>,
    cells: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl VoronoiPartition {
    /// Builds the partition without validating the sites.
    ///
    /// Coincident sites are allowed here: the lower index takes every tied
    /// cell and the other site ends up with an empty cell. The simulation
    /// loop relies on this when greedy strategies pile robots together.
    pub fn from_sites(sites: &[Point], domain: &Domain) -> Self {
        let n = sites.len();
        let mut owner = Vec::with_capacity(domain.num_cells());
        let mut cells = vec![Vec::new(); n];
        for (cell, center) in domain.cell_centers().enumerate() {
            let mut best = 0;
            let mut best_d2 = f64::INFINITY;
            for (i, site) in sites.iter().enumerate() {
                let d2 = center.distance_squared(*site);
                if d2 < best_d2 {
                    best = i;
                    best_d2 = d2;
                }
            }
            owner.push(best);
            if n > 0 {
                cells[best].push(cell);
            }
        }

        let (nx, ny) = (domain.grid_nx(), domain.grid_ny());
        let mut adjacent = vec![vec![false; n]; n];
        for row in 0..ny {
            for col in 0..nx {
                let a = owner[row * nx + col];
                if col + 1 < nx {
                    let b = owner[row * nx + col + 1];
                    if a != b {
                        adjacent[a][b] = true;
                        adjacent[b][a] = true;
                    }
                }
                if row + 1 < ny {
                    let b = owner[(row + 1) * nx + col];
                    if a != b {
                        adjacent[a][b] = true;
                        adjacent[b][a] = true;
                    }
                }
            }
        }
        let neighbors = adjacent
            .iter()
            .map(|row| (0..n).filter(|&j| row[j]).collect())
            .collect();

        VoronoiPartition {
            owner,
            cells,
            neighbors,
        }
    }

    pub fn num_robots(&self) -> usize {
        self.cells.len()
    }

    pub fn owner(&self, cell: usize) -> usize {
        self.owner[cell]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    /// Cells owned by robot `i`, ascending.
    pub fn cells_of(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    /// Delaunay neighbors of robot `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// The full Voronoi cell of robot `i` as a region.
    pub fn region(&self, i: usize) -> CellRegion {
        CellRegion {
            owner: i,
            cells: self.cells[i].clone(),
        }
    }
}

/// Validates `config` and partitions the domain's grid among its robots.
pub fn compute_voronoi(config: &RobotConfiguration, domain: &Domain) -> Result<VoronoiPartition> {
    config.validate(domain)?;
    Ok(VoronoiPartition::from_sites(&config.positions, domain))
}

/// A subset of one robot's Voronoi cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRegion {
    owner: usize,
    cells: Vec<usize>,
}

impl CellRegion {
    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Cells of robot `i` whose centers lie within `range` of `position`,
/// i.e. the grid version of `V_i ∩ B(p_i, R)`.
pub fn restrict_cell(
    partition: &VoronoiPartition,
    domain: &Domain,
    i: usize,
    position: Point,
    range: f64,
) -> CellRegion {
    let r2 = range * range;
    let cells = partition
        .cells_of(i)
        .iter()
        .copied()
        .filter(|&c| domain.cell_center(c).distance_squared(position) <= r2)
        .collect();
    CellRegion { owner: i, cells }
}
