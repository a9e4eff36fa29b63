//! Control laws driving a robot toward a target centroid, and the
//! first-order integrator `p <- clamp(p + v dt)`.

use crate::error::{Error, Result};
use crate::field::{perceived_mass_centroid, DensityField};
use crate::geometry::{clamp_to_domain, restrict_cell, Domain, Point, VoronoiPartition};
use crate::sensor::SensorModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlParams {
    /// Proportional gain, per step.
    pub k_prop: f64,
    /// Slow-down band of the constant-speed law.
    pub delta: f64,
    /// Distance at which a robot counts as having reached its centroid.
    pub d_tol: f64,
    /// Heading resolution in degrees; 0 disables quantization.
    pub heading_quantum: f64,
}

impl Default for ControlParams {
    fn default() -> Self {
        ControlParams {
            k_prop: 1.0,
            delta: 0.3,
            d_tol: 0.3,
            heading_quantum: 1.0,
        }
    }
}

impl ControlParams {
    /// Integration step; speeds are per step.
    pub const DT: f64 = 1.0;

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(name, format!("must be > 0, got {v}")))
            }
        };
        positive("k_prop", self.k_prop)?;
        positive("delta", self.delta)?;
        positive("d_tol", self.d_tol)?;
        if self.heading_quantum != 0.0 && self.heading_quantum != 1.0 {
            return Err(Error::validation(
                "heading_quantum",
                format!("must be 0 (off) or 1 degree, got {}", self.heading_quantum),
            ));
        }
        Ok(())
    }

    pub fn without_quantization(self) -> Self {
        ControlParams {
            heading_quantum: 0.0,
            ..self
        }
    }
}

/// Law used to chase a centroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlLaw {
    Proportional,
    Saturated,
    ConstantSpeed,
}

impl ControlLaw {
    /// Velocity toward `target`; `speed` is `U_max` for the saturated law and
    /// `U` for the constant-speed law.
    pub fn velocity(self, p: Point, target: Point, params: &ControlParams, speed: f64) -> Point {
        match self {
            ControlLaw::Proportional => proportional(p, target, params),
            ControlLaw::Saturated => saturated(p, target, params, speed),
            ControlLaw::ConstantSpeed => constant_speed(p, target, params, speed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ControlLaw::Proportional => "proportional",
            ControlLaw::Saturated => "saturated",
            ControlLaw::ConstantSpeed => "constant_speed",
        }
    }
}

impl std::str::FromStr for ControlLaw {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "proportional" => Ok(ControlLaw::Proportional),
            "saturated" => Ok(ControlLaw::Saturated),
            "constant_speed" => Ok(ControlLaw::ConstantSpeed),
            other => Err(format!("unknown control law `{other}`")),
        }
    }
}

/// `-k_prop (p - c)`.
pub fn proportional(p: Point, c: Point, params: &ControlParams) -> Point {
    (p - c) * -params.k_prop
}

/// Proportional law with its magnitude capped at `u_max`.
pub fn saturated(p: Point, c: Point, params: &ControlParams, u_max: f64) -> Point {
    let v = proportional(p, c, params);
    let speed = v.norm();
    if speed <= u_max {
        v
    } else {
        v * (u_max / speed)
    }
}

/// Full speed `u` toward `c` outside the `delta` band, linear slow-down inside.
pub fn constant_speed(p: Point, c: Point, params: &ControlParams, u: f64) -> Point {
    let offset = p - c;
    let d = offset.norm();
    if d == 0.0 {
        Point::ZERO
    } else if d >= params.delta {
        offset * (-u / d)
    } else {
        offset * (-u / params.delta)
    }
}

/// Proportional law toward the perceived centroid of `V_i ∩ B(p_i, R)`.
/// Robots with no perceived mass in that region hold position.
pub fn range_limited(
    i: usize,
    positions: &[Point],
    partition: &VoronoiPartition,
    field: &DensityField,
    model: &SensorModel,
    params: &ControlParams,
) -> Result<Point> {
    let range = model.require_range()?;
    let p = positions[i];
    let region = restrict_cell(partition, field.domain(), i, p, range);
    let mc = perceived_mass_centroid(field, region.cells(), model, p);
    Ok(match mc.centroid {
        Some(c) => proportional(p, c, params),
        None => Point::ZERO,
    })
}

/// Rounds the direction of `v` to a multiple of `quantum_deg`, keeping its length.
pub fn quantize_heading(v: Point, quantum_deg: f64) -> Point {
    let speed = v.norm();
    if quantum_deg <= 0.0 || speed == 0.0 {
        return v;
    }
    let heading = v.y.atan2(v.x).to_degrees();
    let snapped = ((heading / quantum_deg).round() * quantum_deg).to_radians();
    Point::new(speed * snapped.cos(), speed * snapped.sin())
}

/// One explicit Euler step, heading-quantized and clamped to the domain.
pub fn integrate(p: Point, v: Point, params: &ControlParams, domain: &Domain) -> Point {
    let v = quantize_heading(v, params.heading_quantum);
    clamp_to_domain(p + v * ControlParams::DT, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> ControlParams {
        ControlParams::default()
    }

    #[test]
    fn validates_parameters() {
        assert!(unit().validate().is_ok());
        assert!(ControlParams { k_prop: 0.0, ..unit() }.validate().is_err());
        assert!(ControlParams { delta: -1.0, ..unit() }.validate().is_err());
        assert!(ControlParams { heading_quantum: 5.0, ..unit() }.validate().is_err());
    }

    #[test]
    fn proportional_examples() {
        let p = Point::new(0.0, 0.0);
        assert_eq!(proportional(p, p, &unit()), Point::ZERO);
        assert_eq!(proportional(p, Point::new(1.0, 0.0), &unit()), Point::new(1.0, 0.0));
        let params = ControlParams { k_prop: 0.3, ..unit() };
        let v = proportional(Point::new(1.0, 2.0), Point::new(4.0, 6.0), &params);
        assert!((v.norm() - 0.3 * 5.0).abs() < 1e-12);
        assert!((v.x * 4.0 - v.y * 3.0).abs() < 1e-12);
    }

    #[test]
    fn saturated_examples() {
        let p = Point::new(0.0, 0.0);
        let near = Point::new(0.1, 0.2);
        assert_eq!(saturated(p, near, &unit(), 0.5), proportional(p, near, &unit()));
        assert_eq!(saturated(p, Point::new(10.0, 0.0), &unit(), 0.5), Point::new(0.5, 0.0));
    }

    #[test]
    fn saturated_never_exceeds_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let p = Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let c = Point::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let params = ControlParams { k_prop: rng.random_range(0.01..5.0), ..unit() };
            let cap = rng.random_range(0.01..3.0);
            assert!(saturated(p, c, &params, cap).norm() <= cap * (1.0 + 1e-12));
        }
    }

    #[test]
    fn constant_speed_examples() {
        let params = ControlParams { delta: 0.4, ..unit() };
        let c = Point::new(1.0, 1.0);
        let at_edge = constant_speed(c + Point::new(0.4, 0.0), c, &params, 0.8);
        assert!((at_edge.norm() - 0.8).abs() < 1e-12);
        let just_inside = constant_speed(c + Point::new(0.4 - 1e-12, 0.0), c, &params, 0.8);
        assert!((just_inside.norm() - 0.8).abs() < 1e-9);
        assert_eq!(constant_speed(c, c, &params, 0.8), Point::ZERO);
        let far = constant_speed(c + Point::new(0.0, 0.8), c, &params, 0.8);
        assert!((far.norm() - 0.8).abs() < 1e-12);
        let inside = constant_speed(c + Point::new(0.1, 0.0), c, &params, 0.8);
        assert!((inside.norm() - 0.8 * 0.1 / 0.4).abs() < 1e-12);
    }

    #[test]
    fn range_limited_requires_range() {
        let d = Domain::default();
        let f = DensityField::uniform(d, 1.0).unwrap();
        let sites = [Point::new(2.0, 2.0)];
        let part = VoronoiPartition::from_sites(&sites, &d);
        assert_eq!(
            range_limited(0, &sites, &part, &f, &SensorModel::default(), &unit()),
            Err(Error::MissingRange)
        );
    }

    #[test]
    fn range_limited_holds_without_mass() {
        let d = Domain::default();
        let f = DensityField::uniform(d, 0.0).unwrap();
        let sites = [Point::new(2.0, 2.0), Point::new(7.0, 3.0)];
        let part = VoronoiPartition::from_sites(&sites, &d);
        let model = SensorModel::new(0.5, 0.5, Some(1.5)).unwrap();
        assert_eq!(range_limited(1, &sites, &part, &f, &model, &unit()).unwrap(), Point::ZERO);
    }

    #[test]
    fn range_limited_with_covering_range_is_proportional() {
        let d = Domain::default();
        let f = DensityField::from_bumps(
            d,
            &[crate::field::Bump { center: Point::new(3.0, 8.0), sigma: 2.0, amplitude: 1.0 }],
        )
        .unwrap();
        let sites = [Point::new(2.0, 2.0), Point::new(7.0, 3.0)];
        let part = VoronoiPartition::from_sites(&sites, &d);
        let model = SensorModel::new(0.5, 0.5, Some(d.diameter())).unwrap();
        let v = range_limited(0, &sites, &part, &f, &model, &unit()).unwrap();
        let c = perceived_mass_centroid(&f, part.cells_of(0), &model, sites[0]).centroid.unwrap();
        assert_eq!(v, proportional(sites[0], c, &unit()));
    }

    #[test]
    fn integrate_examples() {
        let d = Domain::default();
        let p = Point::new(5.0, 5.0);
        assert_eq!(integrate(p, Point::ZERO, &unit(), &d), p);
        assert_eq!(integrate(Point::new(9.8, 5.0), Point::new(1.0, 0.0), &unit(), &d).x, 10.0);

        let theta = 44.6f64.to_radians();
        let v = Point::new(2.0 * theta.cos(), 2.0 * theta.sin());
        let q = quantize_heading(v, 1.0);
        assert!((q.y.atan2(q.x).to_degrees() - 45.0).abs() < 1e-9);
        assert!((q.norm() - 2.0).abs() < 1e-12);
    }
}
