//! Voronoi-partition based multi-robot search.
//!
//! A team of robots reduces an uncertainty density over a rectangular
//! domain. Each search multiplies the density at a point by the detection
//! factor of the nearest robot; between searches robots move toward the
//! centroids of their Voronoi cells under the density as their sensors
//! perceive it. The crate provides the geometry, sensor model, density
//! updates, control laws, five search strategies (SDS, CDS, VGS, TGS, RS)
//! and a harness for seeded parameter sweeps.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod sensor;
pub mod strategies;

pub use control::{ControlLaw, ControlParams};
pub use error::{Error, Result};
pub use field::{Bump, DensityField, MassCentroid};
pub use geometry::{CellRegion, Domain, Point, RobotConfiguration, VoronoiPartition};
pub use sensor::{Detection, SensorModel};
pub use strategies::{run, SimulationRecord, StrategyKind, StrategySpec, Termination};

// Compile and run the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sensor.md")]
    mod sensor {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/objective.md")]
    mod objective {}
    #[doc = include_str!("../../../book/src/control.md")]
    mod control {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
