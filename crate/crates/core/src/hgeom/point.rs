use serde::{Deserialize, Serialize};

use crate::error::{HypackError, Result};

/// Point of the upper half-plane model.
///
/// The ordinate is stored twice: as `y` and as `log_y`. Points far from the
/// real axis (or very close to it) keep their exact position in `log_y` even
/// when `y` itself under- or overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct HPoint {
    x: f64,
    y: f64,
    log_y: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for HPoint {
    type Error = HypackError;
    fn try_from(raw: RawPoint) -> Result<Self> {
        HPoint::try_new(raw.x, raw.y)
    }
}

impl From<HPoint> for RawPoint {
    fn from(p: HPoint) -> Self {
        RawPoint { x: p.x, y: p.y }
    }
}

impl HPoint {
    /// The distinguished origin `(0, 1)`.
    pub const ORIGIN: HPoint = HPoint { x: 0.0, y: 1.0, log_y: 0.0 };

    /// Panics unless `y > 0` and both coordinates are finite.
    pub fn new(x: f64, y: f64) -> Self {
        Self::try_new(x, y).expect("invalid half-plane point")
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(HypackError::Domain(format!(
                "({x}, {y}) is not a point of the upper half-plane"
            )));
        }
        Ok(HPoint { x, y, log_y: y.ln() })
    }

    /// Builds a point from its abscissa and the logarithm of its ordinate.
    pub fn from_log(x: f64, log_y: f64) -> Result<Self> {
        if !x.is_finite() || !log_y.is_finite() {
            return Err(HypackError::Domain(format!(
                "(x={x}, log y={log_y}) is not finite"
            )));
        }
        Ok(HPoint { x, y: log_y.exp(), log_y })
    }

    pub(crate) fn from_parts(x: f64, y: f64, log_y: f64) -> Self {
        HPoint { x, y, log_y }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn log_y(&self) -> f64 {
        self.log_y
    }
}

/// Point of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EPoint {
    pub x: f64,
    pub y: f64,
}

impl EPoint {
    pub fn new(x: f64, y: f64) -> Self {
        EPoint { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Hyperbolic distance in the upper half-plane.
///
/// Uses `d = 2 asinh(|p - q| / (2 sqrt(p.y q.y)))`, which is accurate for
/// nearby points and falls back to logarithms when the ordinates leave the
/// range where their product is representable.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    let dx = p.x - q.x;
    if dx == 0.0 {
        return (p.log_y - q.log_y).abs();
    }
    let chord = dx.hypot(p.y - q.y);
    if chord == 0.0 {
        return 0.0;
    }
    let half_log = 0.5 * (p.log_y + q.log_y);
    if half_log.abs() < 700.0 && chord.is_finite() {
        let s = 0.5 * chord * (-half_log).exp();
        if s.is_finite() {
            return 2.0 * s.asinh();
        }
    }
    let log_s = chord.ln() - std::f64::consts::LN_2 - half_log;
    if log_s > 20.0 {
        2.0 * (log_s + std::f64::consts::LN_2)
    } else {
        2.0 * log_s.exp().asinh()
    }
}

/// Hyperbolic area of a disk of radius `r`: `2 pi (cosh r - 1)`.
pub fn ball_area(r: f64) -> f64 {
    let s = (0.5 * r).sinh();
    4.0 * std::f64::consts::PI * s * s
}

/// Angle of parallelism `arcsin(1 / cosh t)` for a geodesic at distance `t`.
pub fn angle_of_parallelism(t: f64) -> f64 {
    (1.0 / t.cosh()).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vertical_distance_is_log_ratio() {
        let p = HPoint::new(0.0, 1.0);
        let q = HPoint::new(0.0, std::f64::consts::E);
        assert_relative_eq!(distance(&p, &q), 1.0, epsilon = 1e-15);
        assert_eq!(distance(&p, &p), 0.0);
    }

    #[test]
    fn horizontal_unit_step() {
        // Oracle: midpoint rule for the length element |dz|/y along the
        // semicircle through (0,1) and (1,1), centred at (1/2, 0).
        let r = 1.25f64.sqrt();
        let t_start = (1.0 / r).atan2(0.5 / r);
        let t_end = (1.0 / r).atan2(-0.5 / r);
        let n = 200_000;
        let h = (t_end - t_start) / n as f64;
        let len: f64 = (0..n)
            .map(|i| h / (t_start + (i as f64 + 0.5) * h).sin())
            .sum();
        let d = distance(&HPoint::new(0.0, 1.0), &HPoint::new(1.0, 1.0));
        assert_relative_eq!(d, len, epsilon = 1e-9);
        assert_relative_eq!(d, 1.5f64.acosh(), epsilon = 1e-14);
    }

    #[test]
    fn extreme_ordinates_stay_finite() {
        let p = HPoint::from_log(0.0, -650.0).unwrap();
        let q = HPoint::from_log(3.0, 650.0).unwrap();
        let d = distance(&p, &q);
        assert!(d.is_finite());
        assert_relative_eq!(d, 1300.0, epsilon = 1e-6);
        let a = HPoint::from_log(1.0, -800.0).unwrap();
        let b = HPoint::from_log(2.0, -800.0).unwrap();
        assert!(distance(&a, &b).is_finite());
    }

    #[test]
    fn ball_area_values() {
        assert_eq!(ball_area(0.0), 0.0);
        assert_relative_eq!(
            ball_area(1.0),
            2.0 * std::f64::consts::PI * (1f64.cosh() - 1.0),
            epsilon = 1e-14
        );
        let ratio = ball_area(19.0) / ball_area(20.0);
        assert!((ratio - (-1f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn parallelism_limits() {
        assert_relative_eq!(angle_of_parallelism(0.0), std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(angle_of_parallelism(1.0), 0.705_026_8, epsilon = 1e-6);
        for t in [0.1, 0.5, 2.0, 7.0] {
            assert_relative_eq!(angle_of_parallelism(t), 2.0 * (-t).exp().atan(), max_relative = 1e-12);
        }
        assert!(angle_of_parallelism(800.0) == 0.0);
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(HPoint::try_new(0.0, -1.0).is_err());
        assert!(HPoint::try_new(f64::NAN, 1.0).is_err());
    }
}
