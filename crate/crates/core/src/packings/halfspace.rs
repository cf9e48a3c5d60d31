use super::Packing;
use crate::error::Result;
use crate::hgeom::{BallSpec, HDisk, HPoint};
use crate::regions::Region;

/// The half-plane `{x >= 0}` bounded by the vertical geodesic `x = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalfSpace;

pub fn halfspace_contains(p: &HPoint) -> bool {
    p.x() >= 0.0
}

impl Region for HalfSpace {
    fn contains(&self, p: &HPoint) -> bool {
        halfspace_contains(p)
    }
    fn label(&self) -> String {
        "halfspace(x>=0)".into()
    }
}

impl Packing for HalfSpace {
    fn bodies_in_ball(&self, _b: &BallSpec) -> Result<Vec<HDisk>> {
        Ok(Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_boundary() {
        assert!(halfspace_contains(&HPoint::new(1.0, 1.0)));
        assert!(!halfspace_contains(&HPoint::new(-1.0, 1.0)));
        assert!(halfspace_contains(&HPoint::new(0.0, 5.0)));
    }
}
