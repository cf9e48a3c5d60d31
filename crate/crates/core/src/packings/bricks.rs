use super::Tile;
use crate::config::Tolerances;
use crate::error::Result;
use crate::hgeom::{BallSpec, HPoint};
use crate::quad::integrate_with_breaks;
use crate::regions::Region;
use crate::rng::SampleRng;

const E2: f64 = 7.38905609893065;

/// The horoball brick `{s <= y < e^2 s, w s k <= x < w s (k+1)}` with
/// `s = e^{2j + offset}`. Bricks with the same `(offset, width)` tile the
/// plane and are congruent under `(x,y) -> (x + w, y)` and
/// `(x,y) -> (e^2 x, e^2 y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrickTile {
    pub level: i64,
    pub index: i64,
    pub offset: f64,
    pub width: f64,
}

impl BrickTile {
    pub fn new(level: i64, index: i64, offset: f64, width: f64) -> Result<Self> {
        if !(0.0..2.0).contains(&offset) {
            return crate::error::domain(format!("brick offset {offset} must lie in [0, 2)"));
        }
        if !(width > 0.0) || !width.is_finite() {
            return crate::error::domain(format!("brick width {width} must be positive"));
        }
        Ok(BrickTile { level, index, offset, width })
    }

    fn log_base(&self) -> f64 {
        2.0 * self.level as f64 + self.offset
    }

    pub fn base(&self) -> f64 {
        self.log_base().exp()
    }

    /// `[x0, x1)` and `[y0, y1)`.
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let s = self.base();
        let step = self.width * s;
        ([step * self.index as f64, step * (self.index + 1) as f64], [s, E2 * s])
    }

    pub fn area(&self) -> f64 {
        self.width * (1.0 - (-2.0f64).exp())
    }

    /// A ball about the brick's middle reaching all four corners; distance
    /// to the centre is maximised at corners along both kinds of side.
    pub fn bounding_ball(&self) -> BallSpec {
        let ([x0, x1], [y0, y1]) = self.bounds();
        let center = HPoint::new(0.5 * (x0 + x1), (y0 * y1).sqrt());
        let radius = [(x0, y0), (x0, y1), (x1, y0), (x1, y1)]
            .iter()
            .map(|&(x, y)| crate::hgeom::distance(&center, &HPoint::new(x, y)))
            .fold(0.0, f64::max);
        BallSpec { center, radius }
    }
}

/// The brick as a region.
pub fn brick_region(t: BrickTile) -> BrickTile {
    t
}

impl Region for BrickTile {
    fn contains(&self, p: &HPoint) -> bool {
        let lb = self.log_base();
        if p.log_y() < lb || p.log_y() >= lb + 2.0 {
            return false;
        }
        let ([x0, x1], _) = self.bounds();
        p.x() >= x0 && p.x() < x1
    }

    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        let ([x0, x1], [y0, y1]) = self.bounds();
        let e = b.euclidean_form();
        let lo = y0.max(e.k - e.r);
        let hi = y1.min(e.k + e.r);
        if !(lo < hi) {
            return Some(Ok(0.0));
        }
        let mut points = vec![lo, hi];
        for x in [x0, x1] {
            let dx = x - e.h;
            let q = (e.r - dx) * (e.r + dx);
            if q > 0.0 {
                for y in [e.k - q.sqrt(), e.k + q.sqrt()] {
                    if y > lo && y < hi {
                        points.push(y);
                    }
                }
            }
        }
        points.sort_by(f64::total_cmp);
        let f = |y: f64| -> f64 {
            let Some(c) = b.chord_half_width(y) else { return 0.0 };
            let len = x1.min(e.h + c) - x0.max(e.h - c);
            len.max(0.0) / (y * y)
        };
        let tol = Tolerances::default().quad_rel;
        let abs = 1e-14 * self.area().min(b.area());
        Some(integrate_with_breaks(f, &points, tol * 1e-1, abs).map(|q| q.value))
    }

    fn label(&self) -> String {
        format!("brick(j={},k={},offset={},w={})", self.level, self.index, self.offset, self.width)
    }
}

impl Tile for BrickTile {
    fn area(&self) -> f64 {
        BrickTile::area(self)
    }

    fn sample(&self, rng: &mut SampleRng) -> HPoint {
        let ([x0, x1], [y0, y1]) = self.bounds();
        let inv = 1.0 / y0 - rng.uniform() * (1.0 / y0 - 1.0 / y1);
        let x = x0 + rng.uniform() * (x1 - x0);
        HPoint::new(x, 1.0 / inv)
    }
}

/// All bricks with a common `(offset, width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrickFamily {
    pub offset: f64,
    pub width: f64,
}

impl BrickFamily {
    pub fn new(offset: f64, width: f64) -> Result<Self> {
        BrickTile::new(0, 0, offset, width)?;
        Ok(BrickFamily { offset, width })
    }

    pub fn tile(&self, level: i64, index: i64) -> BrickTile {
        BrickTile { level, index, offset: self.offset, width: self.width }
    }

    /// The brick containing `p`.
    pub fn tile_at(&self, p: &HPoint) -> BrickTile {
        let level = ((p.log_y() - self.offset) / 2.0).floor() as i64;
        let s = (2.0 * level as f64 + self.offset).exp();
        let index = (p.x() / (self.width * s)).floor() as i64;
        self.tile(level, index)
    }
}
