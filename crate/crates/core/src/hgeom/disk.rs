use serde::{Deserialize, Serialize};

use super::isometry::Isometry;
use super::point::{distance, HPoint};
use crate::config::MAX_RADIUS;
use crate::error::{HypackError, Result};

/// A circle in Euclidean half-plane coordinates: centre `(h, k)`, radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclidCircle {
    pub h: f64,
    pub k: f64,
    pub r: f64,
}

impl EuclidCircle {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let dx = x - self.h;
        let dy = y - self.k;
        dx * dx + dy * dy <= self.r * self.r
    }
}

/// Closed hyperbolic disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HDisk {
    pub center: HPoint,
    pub radius: f64,
}

impl HDisk {
    pub fn new(center: HPoint, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(HypackError::Domain(format!("disk radius {radius} is invalid")));
        }
        Ok(HDisk { center, radius })
    }

    /// Euclidean centre and radius of the same set:
    /// `h = H`, `k = K cosh R`, `r = K sinh R`.
    pub fn euclidean_form(&self) -> EuclidCircle {
        euclid_of(&self.center, self.radius)
    }

    /// Inverse of [`HDisk::euclidean_form`].
    pub fn from_euclidean(c: &EuclidCircle) -> Result<Self> {
        if !(c.k > c.r) || c.r < 0.0 {
            return Err(HypackError::Domain(format!(
                "circle ({}, {}; {}) does not lie in the upper half-plane",
                c.h, c.k, c.r
            )));
        }
        let big_k = ((c.k - c.r) * (c.k + c.r)).sqrt();
        let radius = 0.5 * ((c.k + c.r) / (c.k - c.r)).ln();
        Ok(HDisk { center: HPoint::try_new(c.h, big_k)?, radius })
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        distance(&self.center, p) <= self.radius
    }

    pub fn area(&self) -> f64 {
        super::ball_area(self.radius)
    }

    pub fn transformed(&self, g: &Isometry) -> Result<HDisk> {
        Ok(HDisk { center: g.apply(&self.center)?, radius: self.radius })
    }
}

/// Disk-form of `disk_euclidean_form`.
pub fn disk_euclidean_form(d: &HDisk) -> (f64, f64, f64) {
    let c = d.euclidean_form();
    (c.h, c.k, c.r)
}

fn euclid_of(center: &HPoint, radius: f64) -> EuclidCircle {
    EuclidCircle {
        h: center.x(),
        k: center.y() * radius.cosh(),
        r: center.y() * radius.sinh(),
    }
}

/// A closed ball `B_R(center)` used as an expanding region or query window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: HPoint,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: HPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(HypackError::Domain(format!("ball radius {radius} must be positive")));
        }
        if radius > MAX_RADIUS {
            return Err(HypackError::Range(format!(
                "ball radius {radius} exceeds the supported maximum {MAX_RADIUS}"
            )));
        }
        Ok(BallSpec { center, radius })
    }

    pub fn at_origin(radius: f64) -> Result<Self> {
        Self::new(HPoint::ORIGIN, radius)
    }

    pub fn euclidean_form(&self) -> EuclidCircle {
        euclid_of(&self.center, self.radius)
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        distance(&self.center, p) <= self.radius
    }

    pub fn area(&self) -> f64 {
        super::ball_area(self.radius)
    }

    /// `[ln y_min, ln y_max]` of the ball.
    pub fn log_y_range(&self) -> (f64, f64) {
        let l = self.center.log_y();
        (l - self.radius, l + self.radius)
    }

    /// Half-width of the horizontal chord at height `y`, if the chord exists.
    pub fn chord_half_width(&self, y: f64) -> Option<f64> {
        // (x-H)^2 + (y-K)^2 <= 2 K y (cosh R - 1)
        let big_k = self.center.y();
        let s = (0.5 * self.radius).sinh();
        let rhs = 4.0 * big_k * y * s * s - (y - big_k) * (y - big_k);
        (rhs >= 0.0).then(|| rhs.sqrt())
    }

    pub fn transformed(&self, g: &Isometry) -> Result<BallSpec> {
        Ok(BallSpec { center: g.apply(&self.center)?, radius: self.radius })
    }
}
