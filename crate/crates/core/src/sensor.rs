//! Sensor detection functions.
//!
//! `beta(r) = 1 - k exp(-alpha r^2)` is the factor a search multiplies the
//! uncertainty by at distance `r`. With a range limit `R` two variants matter:
//! the truncated form, constant `beta(R)` beyond `R`, and the shifted form,
//! which adds `1 - beta(R)` so that it equals exactly 1 beyond the range.
//! They differ by a constant inside the range, so their objectives share
//! critical points.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel {
    k: f64,
    alpha: f64,
    range: Option<f64>,
}

impl Default for SensorModel {
    fn default() -> Self {
        SensorModel {
            k: 0.5,
            alpha: 0.5,
            range: None,
        }
    }
}

/// Which range-limited detection function to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detection {
    /// `beta` held at `beta(R)` beyond the range.
    Truncated,
    /// Truncated form shifted up by `1 - beta(R)`; exactly 1 beyond the range.
    Shifted,
}

impl SensorModel {
    pub fn new(k: f64, alpha: f64, range: Option<f64>) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::validation("k", format!("must lie in (0, 1), got {k}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::validation("alpha", format!("must be > 0, got {alpha}")));
        }
        if let Some(r) = range {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::validation("range", format!("must be > 0, got {r}")));
            }
        }
        Ok(SensorModel { k, alpha, range })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn range(&self) -> Option<f64> {
        self.range
    }

    pub fn with_range(self, range: Option<f64>) -> Result<Self> {
        SensorModel::new(self.k, self.alpha, range)
    }

    pub(crate) fn require_range(&self) -> Result<f64> {
        self.range.ok_or(Error::MissingRange)
    }

    /// `k exp(-alpha r^2)`, the weight turning uncertainty into perceived density.
    pub fn perceived_weight(&self, r: f64) -> f64 {
        self.k * (-self.alpha * r * r).exp()
    }

    /// Same as [`perceived_weight`](Self::perceived_weight) from a squared distance.
    pub(crate) fn perceived_weight_sq(&self, r2: f64) -> f64 {
        self.k * (-self.alpha * r2).exp()
    }

    /// Unlimited detection function; the range, if any, is ignored.
    pub fn beta(&self, r: f64) -> Result<f64> {
        check_distance(r)?;
        Ok(1.0 - self.perceived_weight(r))
    }

    /// Range-limited detection function that is exactly 1 at and beyond `R`.
    pub fn beta_hat(&self, r: f64) -> Result<f64> {
        check_distance(r)?;
        let range = self.require_range()?;
        Ok(self.beta_hat_unchecked(r, range))
    }

    fn beta_hat_unchecked(&self, r: f64, range: f64) -> f64 {
        if r >= range {
            1.0
        } else {
            1.0 - self.k * ((-self.alpha * r * r).exp() - (-self.alpha * range * range).exp())
        }
    }

    /// Range-limited detection function frozen at `beta(R)` beyond `R`.
    pub fn beta_tilde(&self, r: f64) -> Result<f64> {
        check_distance(r)?;
        let range = self.require_range()?;
        Ok(1.0 - self.perceived_weight(r.min(range)))
    }

    /// Fraction of uncertainty removed at distance `r`: `1 - beta_hat` with a
    /// range, `1 - beta` without.
    pub fn effectiveness(&self, r: f64) -> Result<f64> {
        check_distance(r)?;
        Ok(self.effectiveness_unchecked(r))
    }

    pub(crate) fn effectiveness_unchecked(&self, r: f64) -> f64 {
        match self.range {
            Some(range) if r >= range => 0.0,
            Some(range) => self.k * ((-self.alpha * r * r).exp() - (-self.alpha * range * range).exp()),
            None => self.perceived_weight(r),
        }
    }

    /// Multiplicative update factor at distance `r`: `beta_hat` or `beta`.
    pub(crate) fn search_factor(&self, r: f64) -> f64 {
        match self.range {
            Some(range) => self.beta_hat_unchecked(r, range),
            None => 1.0 - self.perceived_weight(r),
        }
    }

    /// `1 - detection(r)` for a range-limited variant.
    pub fn detection_complement(&self, detection: Detection, r: f64) -> Result<f64> {
        Ok(match detection {
            Detection::Truncated => 1.0 - self.beta_tilde(r)?,
            Detection::Shifted => 1.0 - self.beta_hat(r)?,
        })
    }

    /// Derivative of `detection(r)` with respect to `r`.
    ///
    /// Both variants are flat beyond `R`; inside, the shift is constant in
    /// `r` and drops out.
    pub fn detection_slope(&self, detection: Detection, r: f64) -> Result<f64> {
        check_distance(r)?;
        let range = self.require_range()?;
        if r >= range {
            return Ok(0.0);
        }
        let slope = 2.0 * self.alpha * r * self.perceived_weight(r);
        Ok(match detection {
            Detection::Truncated | Detection::Shifted => slope,
        })
    }
}

fn check_distance(r: f64) -> Result<()> {
    if r < 0.0 || r.is_nan() {
        Err(Error::NegativeDistance(r))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ranged(r: f64) -> SensorModel {
        SensorModel::new(0.5, 0.5, Some(r)).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SensorModel::new(0.0, 0.5, None).is_err());
        assert!(SensorModel::new(1.0, 0.5, None).is_err());
        assert!(SensorModel::new(0.5, 0.0, None).is_err());
        assert!(SensorModel::new(0.5, 0.5, Some(0.0)).is_err());
    }

    #[test]
    fn beta_examples() {
        let m = SensorModel::default();
        assert_eq!(m.beta(0.0).unwrap(), 0.5);
        assert!(m.beta(1e3).unwrap() > 1.0 - 1e-6);
        // 1 - 0.5 exp(-0.5), evaluated independently.
        assert!((m.beta(1.0).unwrap() - 0.696_734_670_143_683_2).abs() < 1e-12);
        assert_eq!(m.beta(-1.0), Err(Error::NegativeDistance(-1.0)));
    }

    #[test]
    fn beta_hat_examples() {
        let m = ranged(6.0);
        assert_eq!(m.beta_hat(6.0).unwrap(), 1.0);
        assert_eq!(m.beta_hat(7.5).unwrap(), 1.0);
        // 1 - 0.5 (1 - exp(-18))
        assert!((m.beta_hat(0.0).unwrap() - 0.500_000_007_614_989_9).abs() < 1e-15);
        assert_eq!(SensorModel::default().beta_hat(1.0), Err(Error::MissingRange));
        // continuity from below
        assert!((m.beta_hat(6.0 - 1e-9).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn effectiveness_examples() {
        assert_eq!(SensorModel::default().effectiveness(0.0).unwrap(), 0.5);
        let m = ranged(2.0);
        assert_eq!(m.effectiveness(2.0).unwrap(), 0.0);
        assert_eq!(m.effectiveness(3.0).unwrap(), 0.0);
        let at_two = SensorModel::default().effectiveness(2.0).unwrap();
        assert!((at_two - 0.5 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn slopes_agree_between_variants() {
        let m = ranged(3.0);
        for i in 0..60 {
            let r = i as f64 * 0.05;
            let a = m.detection_slope(Detection::Truncated, r).unwrap();
            let b = m.detection_slope(Detection::Shifted, r).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn beta_is_bounded_and_monotone(
            k in 0.01f64..0.99, alpha in 0.01f64..5.0, r1 in 0.0f64..20.0, dr in 0.0f64..5.0
        ) {
            let m = SensorModel::new(k, alpha, None).unwrap();
            let a = m.beta(r1).unwrap();
            let b = m.beta(r1 + dr).unwrap();
            prop_assert!(a >= 1.0 - k && a <= 1.0);
            prop_assert!(b >= a);
            prop_assert!(m.effectiveness(r1).unwrap() >= m.effectiveness(r1 + dr).unwrap());
        }

        #[test]
        fn beta_hat_is_beta_tilde_plus_constant(
            k in 0.01f64..0.99, alpha in 0.01f64..5.0, range in 0.1f64..8.0, frac in 0.0f64..1.0
        ) {
            let m = SensorModel::new(k, alpha, Some(range)).unwrap();
            let r = frac * range * 0.999;
            let shift = 1.0 - m.beta(range).unwrap();
            let lhs = m.beta_hat(r).unwrap();
            let rhs = m.beta_tilde(r).unwrap() + shift;
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
