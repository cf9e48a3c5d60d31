use serde::{Deserialize, Serialize};

use super::point::HPoint;
use crate::config::Tolerances;
use crate::error::{HypackError, Result};

/// A complete geodesic of the half-plane, as a Euclidean vertical line or a
/// semicircle centred on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Geodesic {
    Vertical { x: f64 },
    Semicircle { center: f64, radius: f64 },
}

impl Geodesic {
    /// The geodesic through two distinct points.
    pub fn through(p: &HPoint, q: &HPoint) -> Result<Self> {
        let tol = Tolerances::default().vertical_geodesic;
        let dx = q.x() - p.x();
        let scale = p.x().abs().max(q.x().abs()).max(p.y()).max(q.y());
        if dx.abs() <= tol * scale {
            if (p.y() - q.y()).abs() <= tol * scale {
                return Err(HypackError::Domain("geodesic through coincident points".into()));
            }
            return Ok(Geodesic::Vertical { x: 0.5 * (p.x() + q.x()) });
        }
        let np = p.x() * p.x() + p.y() * p.y();
        let nq = q.x() * q.x() + q.y() * q.y();
        let center = (nq - np) / (2.0 * dx);
        let radius = (p.x() - center).hypot(p.y());
        Ok(Geodesic::Semicircle { center, radius })
    }

    /// Hyperbolic distance from `p` to the geodesic.
    pub fn distance_to(&self, p: &HPoint) -> f64 {
        match *self {
            Geodesic::Vertical { x } => ((p.x() - x) / p.y()).abs().asinh(),
            Geodesic::Semicircle { center, radius } => {
                let dx = p.x() - center;
                let q = (dx - radius) * (dx + radius) + p.y() * p.y();
                (q / (2.0 * radius * p.y())).abs().asinh()
            }
        }
    }

    /// Point of the geodesic at signed arc length `t` from its top
    /// (the point of largest ordinate; for vertical lines, from `y = 1`).
    pub fn point_at(&self, t: f64) -> HPoint {
        match *self {
            Geodesic::Vertical { x } => HPoint::from_log(x, t).expect("finite parameter"),
            Geodesic::Semicircle { center, radius } => {
                // angle from the positive real direction: cos = tanh, sin = sech
                let c = t.tanh();
                let s = 1.0 / t.cosh();
                HPoint::new(center + radius * c, radius * s)
            }
        }
    }
}

/// The locus of points equidistant from `p` and `q`.
///
/// From `d(z,p) = d(z,q)` iff `|z-p|^2 / p.y = |z-q|^2 / q.y`.
pub fn perpendicular_bisector(p: &HPoint, q: &HPoint) -> Result<Geodesic> {
    let tol = Tolerances::default().vertical_geodesic;
    let scale = p.y().max(q.y());
    let dy = q.y() - p.y();
    if dy.abs() <= tol * scale {
        if (p.x() - q.x()).abs() <= tol * scale.max(p.x().abs()) {
            return Err(HypackError::Domain("bisector of coincident points".into()));
        }
        return Ok(Geodesic::Vertical { x: 0.5 * (p.x() + q.x()) });
    }
    let center = (q.y() * p.x() - p.y() * q.x()) / dy;
    let np = p.x() * p.x() + p.y() * p.y();
    let nq = q.x() * q.x() + q.y() * q.y();
    let r2 = center * center - (q.y() * np - p.y() * nq) / dy;
    Ok(Geodesic::Semicircle { center, radius: r2.sqrt() })
}
