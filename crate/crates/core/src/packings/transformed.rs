use super::{BodyPiece, FundamentalDomain, Packing};
use crate::error::Result;
use crate::hgeom::{BallSpec, GeodesicPolygon, HDisk, HPoint, Isometry};
use crate::regions::Region;

/// The image `gP` of a packing under an isometry.
#[derive(Debug, Clone)]
pub struct Transformed<P> {
    inner: P,
    g: Isometry,
    g_inv: Isometry,
}

impl<P> Transformed<P> {
    pub fn new(inner: P, g: Isometry) -> Self {
        Transformed { inner, g, g_inv: g.inverse() }
    }

    pub fn isometry(&self) -> &Isometry {
        &self.g
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Region> Region for Transformed<P> {
    fn contains(&self, p: &HPoint) -> bool {
        self.inner.contains(&self.g_inv.apply_unchecked(p))
    }

    fn exact_area_in_ball(&self, b: &BallSpec) -> Option<Result<f64>> {
        match b.transformed(&self.g_inv) {
            Ok(pre) => self.inner.exact_area_in_ball(&pre),
            Err(e) => Some(Err(e)),
        }
    }

    fn label(&self) -> String {
        format!("g·{}", self.inner.label())
    }
}

impl<P: Packing> Packing for Transformed<P> {
    fn bodies_in_ball(&self, b: &BallSpec) -> Result<Vec<HDisk>> {
        let pre = b.transformed(&self.g_inv)?;
        self.inner.bodies_in_ball(&pre)?.iter().map(|d| d.transformed(&self.g)).collect()
    }

    fn fundamental_domain(&self) -> Option<FundamentalDomain> {
        let fd = self.inner.fundamental_domain()?;
        let vertices: Result<Vec<HPoint>> = fd.polygon.vertices().iter().map(|v| self.g.apply(v)).collect();
        let polygon = GeodesicPolygon::new(vertices.ok()?).ok()?;
        let pieces: Option<Vec<BodyPiece>> = fd
            .pieces
            .iter()
            .map(|p| Some(BodyPiece { disk: p.disk.transformed(&self.g).ok()?, angle: p.angle }))
            .collect();
        Some(FundamentalDomain { polygon, pieces: pieces? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::distance;
    use crate::packings::BoroczkyPacking;

    #[test]
    fn dilation_by_e2_preserves_boroczky() {
        let p = BoroczkyPacking::maximal();
        let g = Isometry::dilation(2f64.exp()).unwrap();
        let moved = Transformed::new(p, g);
        let b = BallSpec::new(HPoint::new(0.4, 1.3), 3.0).unwrap();
        let a = p.bodies_in_ball(&b).unwrap();
        let c = moved.bodies_in_ball(&b).unwrap();
        assert_eq!(a.len(), c.len());
        for d in &c {
            let best = a.iter().map(|e| distance(&e.center, &d.center)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9);
        }
    }
}
