use std::f64::consts::PI;

use super::disk::BallSpec;
use super::geodesic::Geodesic;
use super::hyperboloid::Hv;
use super::isometry::Isometry;
use super::point::{distance, HPoint};
use crate::error::{HypackError, Result};

/// Convex geodesic polygon.
///
/// The polygon is validated on construction (simple, every interior angle in
/// `(0, pi)`) and caches its Klein-model image in a frame centred on its
/// barycentre, where containment is a plain convexity test.
#[derive(Debug, Clone)]
pub struct GeodesicPolygon {
    vertices: Vec<HPoint>,
    frame: Isometry,
    klein: Vec<[f64; 2]>,
    orientation: f64,
    angles: Vec<f64>,
    centroid: HPoint,
}

impl GeodesicPolygon {
    pub fn new(vertices: Vec<HPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(HypackError::Domain(format!("polygon needs 3 vertices, got {n}")));
        }
        // barycentre of the hyperboloid images, computed in the frame of vertex 0
        let pre = Isometry::to_origin(&vertices[0]);
        let mut sum = [0.0; 3];
        for v in &vertices {
            let h = Hv::from_uhp(&pre.apply_unchecked(v));
            for k in 0..3 {
                sum[k] += h.0[k];
            }
        }
        let centroid = pre.inverse().apply_unchecked(&Hv::normalize(sum).to_uhp());
        let frame = Isometry::to_origin(&centroid);
        let hv: Vec<Hv> = vertices.iter().map(|v| Hv::from_uhp(&frame.apply_unchecked(v))).collect();
        let klein: Vec<[f64; 2]> = hv.iter().map(Hv::klein).collect();

        let mut turning = 0.0;
        let mut sign = 0.0;
        for i in 0..n {
            let a = klein[i];
            let b = klein[(i + 1) % n];
            let c = klein[(i + 2) % n];
            let e1 = [b[0] - a[0], b[1] - a[1]];
            let e2 = [c[0] - b[0], c[1] - b[1]];
            let cross = e1[0] * e2[1] - e1[1] * e2[0];
            let dot = e1[0] * e2[0] + e1[1] * e2[1];
            let scale = (e1[0].hypot(e1[1]) * e2[0].hypot(e2[1])).max(f64::MIN_POSITIVE);
            if cross.abs() <= 1e-14 * scale {
                return Err(HypackError::Domain(format!(
                    "polygon has a straight or zero angle at vertex {}",
                    (i + 1) % n
                )));
            }
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return Err(HypackError::Domain("polygon is not convex".into()));
            }
            turning += cross.atan2(dot);
        }
        if (turning.abs() - 2.0 * PI).abs() > 1e-6 {
            return Err(HypackError::Domain("polygon is self-intersecting".into()));
        }

        let angles = (0..n)
            .map(|i| hv[i].angle(&hv[(i + n - 1) % n], &hv[(i + 1) % n]))
            .collect::<Vec<_>>();
        let poly = GeodesicPolygon { vertices, frame, klein, orientation: sign, angles, centroid };
        if poly.area() <= 0.0 {
            return Err(HypackError::Domain("polygon has non-positive area".into()));
        }
        Ok(poly)
    }

    /// Regular polygon with `n` sides and the given interior angle, with one
    /// vertex straight above `center`.
    pub fn regular(center: &HPoint, n: usize, interior_angle: f64) -> Result<Self> {
        let nf = n as f64;
        if n < 3 || !(interior_angle > 0.0) || interior_angle >= PI * (nf - 2.0) / nf {
            return Err(HypackError::Domain(format!(
                "no hyperbolic regular {n}-gon with angle {interior_angle}"
            )));
        }
        let circumradius = ((1.0 / (PI / nf).tan()) / (0.5 * interior_angle).tan()).acosh();
        let top = HPoint::from_log(0.0, circumradius)?;
        let move_to = Isometry::from_origin(center);
        let vertices = (0..n)
            .map(|i| {
                let rot = Isometry::rotation_at_origin(2.0 * PI * i as f64 / nf);
                move_to.compose(&rot).apply(&top)
            })
            .collect::<Result<Vec<_>>>()?;
        GeodesicPolygon::new(vertices)
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn interior_angles(&self) -> &[f64] {
        &self.angles
    }

    /// `(n - 2) pi - sum of interior angles`.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len() as f64;
        (n - 2.0) * PI - self.angles.iter().sum::<f64>()
    }

    pub fn edges(&self) -> Vec<Geodesic> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                Geodesic::through(&self.vertices[i], &self.vertices[(i + 1) % n])
                    .expect("validated polygon has distinct vertices")
            })
            .collect()
    }

    pub fn centroid(&self) -> HPoint {
        self.centroid
    }

    /// Smallest ball about the barycentre containing every vertex.
    pub fn bounding_ball(&self) -> BallSpec {
        let r = self
            .vertices
            .iter()
            .map(|v| distance(&self.centroid, v))
            .fold(0.0, f64::max);
        BallSpec { center: self.centroid, radius: r.max(1e-12) }
    }

    /// Signed Klein-model margin of `p` to the nearest edge line: positive
    /// inside, negative outside.
    pub(crate) fn klein_margin(&self, p: &HPoint) -> f64 {
        let k = Hv::from_uhp(&self.frame.apply_unchecked(p)).klein();
        let n = self.klein.len();
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let a = self.klein[i];
            let b = self.klein[(i + 1) % n];
            let e = [b[0] - a[0], b[1] - a[1]];
            let len = e[0].hypot(e[1]);
            let cross = e[0] * (k[1] - a[1]) - e[1] * (k[0] - a[0]);
            margin = margin.min(self.orientation * cross / len);
        }
        margin
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.klein_margin(p) >= 0.0
    }
}

/// Gauss-Bonnet area of a polygon from its interior angles.
pub fn gauss_bonnet_area(angles: &[f64]) -> Result<f64> {
    let n = angles.len();
    if n < 3 {
        return Err(HypackError::Domain("a polygon has at least 3 angles".into()));
    }
    let area = (n as f64 - 2.0) * PI - angles.iter().sum::<f64>();
    if area < -1e-12 {
        return Err(HypackError::Domain(format!("angle sum exceeds (n-2)pi by {}", -area)));
    }
    Ok(area.max(0.0))
}

/// Area of a validated polygon.
pub fn polygon_area(p: &GeodesicPolygon) -> f64 {
    p.area()
}
