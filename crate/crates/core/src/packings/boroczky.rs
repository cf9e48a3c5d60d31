use super::Packing;
use crate::error::{HypackError, Result};
use crate::hgeom::{distance, BallSpec, HDisk, HPoint};
use crate::regions::Region;

/// How the lattice points `(e^{2j+1/2}(k+1/2), e^{2j+1/2})` are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterConvention {
    /// The lattice points are the hyperbolic centres of the disks.
    #[default]
    Hyperbolic,
    /// The lattice points are the Euclidean centres of the disks' circles.
    Euclidean,
}

impl CenterConvention {
    pub fn max_radius(self) -> f64 {
        match self {
            CenterConvention::Hyperbolic => 1.5f64.acosh() / 2.0,
            CenterConvention::Euclidean => 0.5f64.atanh(),
        }
    }
}

/// Largest disk radius for which the packing stays disjoint: half the
/// within-row centre distance `arccosh(1.5)`.
pub fn boroczky_max_radius() -> f64 {
    CenterConvention::Hyperbolic.max_radius()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoroczkyPacking {
    pub radius: f64,
    pub convention: CenterConvention,
}

impl BoroczkyPacking {
    pub fn new(radius: f64) -> Result<Self> {
        Self::with_convention(radius, CenterConvention::Hyperbolic)
    }

    pub fn maximal() -> Self {
        BoroczkyPacking { radius: boroczky_max_radius(), convention: CenterConvention::Hyperbolic }
    }

    pub fn with_convention(radius: f64, convention: CenterConvention) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return crate::error::domain(format!("disk radius {radius} must be positive"));
        }
        let max = convention.max_radius();
        if radius > max + 1e-12 {
            return Err(HypackError::Saturation { rho: radius, max });
        }
        Ok(BoroczkyPacking { radius, convention })
    }

    /// Lattice row height `e^{2j+1/2}`, as a logarithm.
    fn row_log(j: i64) -> f64 {
        2.0 * j as f64 + 0.5
    }

    /// Log of the hyperbolic centre height in row `j`.
    fn center_log(&self, j: i64) -> f64 {
        match self.convention {
            CenterConvention::Hyperbolic => Self::row_log(j),
            CenterConvention::Euclidean => Self::row_log(j) - self.radius.cosh().ln(),
        }
    }

    pub fn disk(&self, j: i64, k: i64) -> HDisk {
        let row = Self::row_log(j).exp();
        let c = HPoint::from_parts(row * (k as f64 + 0.5), self.center_log(j).exp(), self.center_log(j));
        HDisk { center: c, radius: self.radius }
    }

    /// Disks whose centre lies within `reach` of `b.center`.
    fn disks_near(&self, b: &BallSpec, reach: f64) -> Vec<HDisk> {
        let (lo, hi) = b.log_y_range();
        let (lo, hi) = (lo - reach + b.radius, hi + reach - b.radius);
        let shift = self.center_log(0) - Self::row_log(0);
        let j_lo = ((lo - shift - 0.5) / 2.0).floor() as i64;
        let j_hi = ((hi - shift - 0.5) / 2.0).ceil() as i64;
        let wide = BallSpec { center: b.center, radius: reach };
        let mut out = Vec::new();
        for j in j_lo..=j_hi {
            let log_c = self.center_log(j);
            if log_c < lo - 1e-12 || log_c > hi + 1e-12 {
                continue;
            }
            let Some(half) = wide.chord_half_width(log_c.exp()) else { continue };
            let step = Self::row_log(j).exp();
            let h = b.center.x();
            let k_lo = ((h - half) / step - 0.5).floor() as i64;
            let k_hi = ((h + half) / step - 0.5).ceil() as i64;
            for k in k_lo..=k_hi {
                let d = self.disk(j, k);
                if distance(&d.center, &b.center) <= reach {
                    out.push(d);
                }
            }
        }
        out
    }

    fn row_candidates(&self, p: &HPoint) -> impl Iterator<Item = i64> + '_ {
        let shift = self.center_log(0) - Self::row_log(0);
        let lo = ((p.log_y() - self.radius - shift - 0.5) / 2.0).floor() as i64;
        let hi = ((p.log_y() + self.radius - shift - 0.5) / 2.0).ceil() as i64;
        lo..=hi
    }
}

/// Disks of the Böröczky packing with radius `rho` that meet the ball `b`.
pub fn boroczky_disks_in_ball(b: &BallSpec, rho: f64) -> Result<Vec<HDisk>> {
    BoroczkyPacking::new(rho)?.bodies_in_ball(b)
}

impl Region for BoroczkyPacking {
    fn contains(&self, p: &HPoint) -> bool {
        for j in self.row_candidates(p) {
            let step = Self::row_log(j).exp();
            let k0 = (p.x() / step - 0.5).round() as i64;
            for k in k0 - 1..=k0 + 1 {
                if self.disk(j, k).contains(p) {
                    return true;
                }
            }
        }
        false
    }

    fn label(&self) -> String {
        format!("boroczky(rho={})", self.radius)
    }
}

impl Packing for BoroczkyPacking {
    fn bodies_in_ball(&self, b: &BallSpec) -> Result<Vec<HDisk>> {
        Ok(self.disks_near(b, b.radius + self.radius))
    }
}
