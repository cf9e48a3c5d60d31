use super::Packing;
use crate::error::Result;
use crate::hgeom::{BallSpec, HDisk, HPoint};
use crate::regions::{band_area_in_ball, stripe_range, Region};

/// Horocycles `y_j = e^{(j+1/2)W}` cut the plane into stripes of hyperbolic
/// width `W`; stripe `j` is `[y_j, y_{j+1})` and is black when `j` is even.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripeModel {
    pub width: f64,
}

impl StripeModel {
    pub fn new(width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return crate::error::domain(format!("stripe width {width} must be positive"));
        }
        Ok(StripeModel { width })
    }

    /// Height of horocycle `h_j`.
    pub fn horocycle(&self, j: i64) -> f64 {
        ((j as f64 + 0.5) * self.width).exp()
    }

    pub fn stripe_index(&self, p: &HPoint) -> i64 {
        (p.log_y() / self.width - 0.5).floor() as i64
    }
}

pub fn stripe_contains(p: &HPoint, width: f64) -> bool {
    ((p.log_y() / width - 0.5).floor() as i64).rem_euclid(2) == 0
}

impl Region for StripeModel {
    fn contains(&self, p: &HPoint) -> bool {
        stripe_contains(p, self.width)
    }

    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        let (bot, top) = b.log_y_range();
        let mut total = 0.0;
        for j in stripe_range(bot, top, self.width) {
            if j.rem_euclid(2) == 0 {
                let lo = (j as f64 + 0.5) * self.width;
                match band_area_in_ball(b, lo, lo + self.width) {
                    Ok(a) => total += a,
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        Some(Ok(total))
    }

    fn label(&self) -> String {
        format!("stripe(W={})", self.width)
    }
}

impl Packing for StripeModel {
    fn bodies_in_ball(&self, _b: &BallSpec) -> Result<Vec<HDisk>> {
        Ok(Vec::new())
    }
}
