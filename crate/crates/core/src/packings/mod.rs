//! Packings and regions: stripe model, half-space, Böröczky disks,
//! tight-radius `{3,m}` packings, horoball bricks, explicit disk sets and the
//! Euclidean comparison cases.

mod boroczky;
mod bricks;
mod diskset;
pub mod euclid;
mod halfspace;
mod stripe;
mod tight;
mod transformed;

pub use boroczky::{boroczky_disks_in_ball, boroczky_max_radius, BoroczkyPacking, CenterConvention};
pub use bricks::{brick_region, BrickFamily, BrickTile};
pub use diskset::DiskSet;
pub use halfspace::{halfspace_contains, HalfSpace};
pub use stripe::{stripe_contains, StripeModel};
pub use tight::{tight_centers_in_ball, tight_density_formula, tight_radius, TightPacking};
pub use transformed::Transformed;

use std::f64::consts::PI;

use crate::error::Result;
use crate::hgeom::{BallSpec, GeodesicPolygon, HDisk, HPoint};
use crate::index::PointIndex;
use crate::regions::Region;
use crate::rng::SampleRng;

/// A family of bodies with pairwise disjoint interiors.
///
/// The covered set is the packing's [`Region`]; `bodies_in_ball` lists the
/// disk bodies meeting a window (region-type packings such as the stripe
/// model have none).
pub trait Packing: Region {
    fn bodies_in_ball(&self, b: &BallSpec) -> Result<Vec<HDisk>>;

    fn covers(&self, p: &HPoint) -> bool {
        self.contains(p)
    }

    fn fundamental_domain(&self) -> Option<FundamentalDomain> {
        None
    }
}

/// A disk sector `disk ∩ domain`, i.e. the part of a body inside a
/// fundamental domain, recorded by its opening angle at the disk centre.
#[derive(Debug, Clone, Copy)]
pub struct BodyPiece {
    pub disk: HDisk,
    pub angle: f64,
}

#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    pub polygon: GeodesicPolygon,
    pub pieces: Vec<BodyPiece>,
}

impl FundamentalDomain {
    pub fn covered_area(&self) -> f64 {
        self.pieces.iter().map(|p| p.angle / (2.0 * PI) * p.disk.area()).sum()
    }
}

/// A region of finite area that can be sampled uniformly.
pub trait Tile: Region {
    fn area(&self) -> f64;
    fn sample(&self, rng: &mut SampleRng) -> HPoint;
}

impl Region for GeodesicPolygon {
    fn contains(&self, p: &HPoint) -> bool {
        GeodesicPolygon::contains(self, p)
    }
    fn label(&self) -> String {
        format!("{}-gon", self.vertices().len())
    }
}

impl Tile for GeodesicPolygon {
    fn area(&self) -> f64 {
        GeodesicPolygon::area(self)
    }

    /// Rejection sampling from the bounding ball.
    fn sample(&self, rng: &mut SampleRng) -> HPoint {
        let ball = self.bounding_ball();
        loop {
            let p = crate::regions::ball_point(&ball, rng.uniform(), rng.uniform());
            if self.contains(&p) {
                return p;
            }
        }
    }
}

/// Smallest `d(c1, c2) - r1 - r2` over pairs of disks that come within
/// `slack` of each other; `+inf` when no pair does.
pub fn disjointness_gap(disks: &[HDisk]) -> f64 {
    let max_r = disks.iter().map(|d| d.radius).fold(0.0, f64::max);
    let slack = 1.0;
    let idx = PointIndex::from_points(disks.iter().map(|d| d.center), (2.0 * max_r).max(0.25));
    let mut gap = f64::INFINITY;
    for (i, d) in disks.iter().enumerate() {
        idx.for_each_within(&d.center, 2.0 * max_r + slack, |j, dist| {
            if j > i {
                gap = gap.min(dist - d.radius - disks[j].radius);
            }
        });
    }
    gap
}
