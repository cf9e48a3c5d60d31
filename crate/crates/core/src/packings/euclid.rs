//! Euclidean comparison cases: the even annuli around the origin and disks
//! on a square lattice.

use std::f64::consts::PI;

use crate::error::Result;
use crate::hgeom::EPoint;

pub trait EuclidRegion: Send + Sync {
    fn contains(&self, p: &EPoint) -> bool;

    /// Exact covered fraction of the disk of radius `r` about the origin.
    fn exact_fraction_in_disk(&self, _r: f64) -> Option<f64> {
        None
    }

    fn label(&self) -> String;
}

/// `S = ∪ {P_j : j even, j >= 2}` with `P_j = {2^{j-1} < |p| <= 2^j}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnnulusSet;

impl AnnulusSet {
    /// Index `j` of the annulus `P_j` containing a point at distance `r`.
    pub fn annulus_index(r: f64) -> i64 {
        r.log2().ceil() as i64
    }
}

impl EuclidRegion for AnnulusSet {
    fn contains(&self, p: &EPoint) -> bool {
        let j = Self::annulus_index(p.norm());
        j >= 2 && j % 2 == 0
    }

    fn exact_fraction_in_disk(&self, r: f64) -> Option<f64> {
        if !(r > 0.0) {
            return None;
        }
        let mut covered = 0.0;
        let mut j = 2i32;
        while 2f64.powi(j - 1) < r {
            let outer = r.min(2f64.powi(j));
            covered += outer * outer - 4f64.powi(j - 1);
            j += 2;
        }
        Some(covered / (r * r))
    }

    fn label(&self) -> String {
        "annuli(j even)".into()
    }
}

/// Closed disks of radius `radius` centred on the lattice `spacing · Z^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeDisks {
    pub spacing: f64,
    pub radius: f64,
}

impl LatticeDisks {
    pub fn new(spacing: f64, radius: f64) -> Result<Self> {
        if !(spacing > 0.0) || !(radius >= 0.0) || 2.0 * radius > spacing {
            return crate::error::domain(format!(
                "lattice disks need 0 <= 2·radius <= spacing (radius {radius}, spacing {spacing})"
            ));
        }
        Ok(LatticeDisks { spacing, radius })
    }

    /// Covered fraction of one period cell.
    pub fn cell_fraction(&self) -> f64 {
        PI * self.radius * self.radius / (self.spacing * self.spacing)
    }
}

impl EuclidRegion for LatticeDisks {
    fn contains(&self, p: &EPoint) -> bool {
        let dx = p.x - self.spacing * (p.x / self.spacing).round();
        let dy = p.y - self.spacing * (p.y / self.spacing).round();
        dx * dx + dy * dy <= self.radius * self.radius
    }

    fn label(&self) -> String {
        format!("lattice(a={},r={})", self.spacing, self.radius)
    }
}

/// The empty Euclidean packing.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyEuclid;

impl EuclidRegion for EmptyEuclid {
    fn contains(&self, _p: &EPoint) -> bool {
        false
    }
    fn exact_fraction_in_disk(&self, _r: f64) -> Option<f64> {
        Some(0.0)
    }
    fn label(&self) -> String {
        "empty".into()
    }
}
