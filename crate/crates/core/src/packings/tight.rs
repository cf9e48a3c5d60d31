use std::collections::VecDeque;
use std::f64::consts::PI;

use super::{BodyPiece, FundamentalDomain, Packing};
use crate::error::{HypackError, Result};
use crate::hgeom::{distance, BallSpec, GeodesicPolygon, HDisk, HPoint, Isometry};
use crate::index::PointIndex;
use crate::regions::Region;

const DEDUP: f64 = 1e-6;
const AMBIGUITY: f64 = 1e-4;
const WINDOW_GUARD: f64 = 20.0;

fn check_m(m: u32) -> Result<()> {
    if m < 7 {
        return crate::error::domain(format!("m = {m}: the {{3,m}} tiling is hyperbolic only for m >= 7"));
    }
    Ok(())
}

/// Radius `r_m` for which equilateral triangles of side `2 r_m` have angles
/// `2π/m`.
pub fn tight_radius(m: u32) -> Result<f64> {
    check_m(m)?;
    let t = PI / m as f64;
    Ok(0.5 * (1.0 / (t.tan() * (2.0 * t).tan())).acosh())
}

/// Density `(3 csc(π/m) - 6) / (m - 6)` of the tight packing.
pub fn tight_density_formula(m: u32) -> Result<f64> {
    check_m(m)?;
    Ok((3.0 / (PI / m as f64).sin() - 6.0) / (m as f64 - 6.0))
}

/// Disks of radius `r_m` centred at the vertices of the `{3,m}` triangulation
/// that has a vertex at `(0,1)`.
///
/// Vertices are addressed by frames: isometries taking `(0,1)` to the vertex
/// with the first outgoing edge pointing at the vertex it was reached from.
#[derive(Debug, Clone)]
pub struct TightPacking {
    m: u32,
    radius: f64,
    moves: Vec<Isometry>,
    neighbours: Vec<HPoint>,
}

impl TightPacking {
    pub fn new(m: u32) -> Result<Self> {
        let radius = tight_radius(m)?;
        let step = Isometry::dilation((2.0 * radius).exp())?;
        let back = Isometry::rotation_at_origin(PI);
        let moves: Vec<Isometry> = (0..m)
            .map(|i| {
                Isometry::rotation_at_origin(2.0 * PI * i as f64 / m as f64)
                    .compose(&step)
                    .compose(&back)
            })
            .collect();
        let neighbours = moves.iter().map(|g| g.apply_unchecked(&HPoint::ORIGIN)).collect();
        Ok(TightPacking { m, radius, moves, neighbours })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The `m` vertices adjacent to `(0,1)`, counter-clockwise.
    pub fn neighbours_of_origin(&self) -> &[HPoint] {
        &self.neighbours
    }

    /// Frame of the vertex nearest to `p` and its distance, found by greedy
    /// descent on the triangulation from `(0,1)`.
    pub fn nearest_vertex(&self, p: &HPoint) -> (Isometry, f64) {
        let mut frame = Isometry::IDENTITY;
        let mut d = distance(&HPoint::ORIGIN, p);
        for _ in 0..1_000_000 {
            let mut best: Option<(usize, f64)> = None;
            for (i, n) in self.neighbours.iter().enumerate() {
                let di = distance(&frame.apply_unchecked(n), p);
                if di < best.map_or(d, |b| b.1) {
                    best = Some((i, di));
                }
            }
            match best {
                Some((i, di)) if di < d - 1e-14 * (1.0 + d) => {
                    frame = frame.compose(&self.moves[i]);
                    d = di;
                }
                _ => break,
            }
        }
        (frame, d)
    }

    /// BFS over vertex frames within `cap` of `b.center`.
    pub(crate) fn frames_within(&self, center: &HPoint, cap: f64) -> Result<Vec<(Isometry, HPoint)>> {
        let (start, _) = self.nearest_vertex(center);
        let start_pt = start.apply_unchecked(&HPoint::ORIGIN);
        if distance(&start_pt, center) > cap {
            return Ok(Vec::new());
        }
        let mut index = PointIndex::new(self.radius);
        index.insert(start_pt);
        let mut frames = vec![(start, start_pt)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let f = frames[v].0;
            for mv in &self.moves {
                let g = f.compose(mv);
                let c = g.apply_unchecked(&HPoint::ORIGIN);
                if distance(&c, center) > cap {
                    continue;
                }
                let mut dup = false;
                let mut ambiguous = None;
                index.for_each_within(&c, AMBIGUITY, |_, d| {
                    if d <= DEDUP {
                        dup = true;
                    } else {
                        ambiguous = Some(d);
                    }
                });
                if let Some(d) = ambiguous {
                    return Err(HypackError::DedupAmbiguity { distance: d });
                }
                if !dup {
                    index.insert(c);
                    frames.push((g, c));
                    queue.push_back(frames.len() - 1);
                }
            }
        }
        Ok(frames)
    }

    pub fn centers_in_ball(&self, b: &BallSpec) -> Result<Vec<HPoint>> {
        guard(b)?;
        let frames = self.frames_within(&b.center, b.radius + 2.0 * self.radius)?;
        Ok(frames
            .into_iter()
            .map(|(_, c)| c)
            .filter(|c| distance(c, &b.center) <= b.radius)
            .collect())
    }

    /// The face triangle with vertices `(0,1)` and its first two neighbours.
    pub fn face_triangle(&self) -> GeodesicPolygon {
        GeodesicPolygon::new(vec![HPoint::ORIGIN, self.neighbours[0], self.neighbours[1]])
            .expect("face triangle is non-degenerate")
    }
}

fn guard(b: &BallSpec) -> Result<()> {
    if b.radius > WINDOW_GUARD {
        return Err(HypackError::Range(format!(
            "window radius {} exceeds the enumeration guard {WINDOW_GUARD}",
            b.radius
        )));
    }
    Ok(())
}

/// Vertices of the `{3,m}` triangulation through `(0,1)` within `b`.
pub fn tight_centers_in_ball(m: u32, b: &BallSpec) -> Result<Vec<HPoint>> {
    TightPacking::new(m)?.centers_in_ball(b)
}

impl Region for TightPacking {
    fn contains(&self, p: &HPoint) -> bool {
        self.nearest_vertex(p).1 <= self.radius
    }

    fn label(&self) -> String {
        format!("tight(m={})", self.m)
    }
}

impl Packing for TightPacking {
    fn bodies_in_ball(&self, b: &BallSpec) -> Result<Vec<HDisk>> {
        guard(b)?;
        let reach = b.radius + self.radius;
        Ok(self
            .frames_within(&b.center, reach)?
            .into_iter()
            .filter(|(_, c)| distance(c, &b.center) <= reach)
            .map(|(_, c)| HDisk { center: c, radius: self.radius })
            .collect())
    }

    fn fundamental_domain(&self) -> Option<FundamentalDomain> {
        let polygon = self.face_triangle();
        let angle = 2.0 * PI / self.m as f64;
        let pieces = polygon
            .vertices()
            .iter()
            .map(|&c| BodyPiece { disk: HDisk { center: c, radius: self.radius }, angle })
            .collect();
        Some(FundamentalDomain { polygon, pieces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::ball_area;
    use crate::packings::disjointness_gap;

    #[test]
    fn radius_identities() {
        let r7 = tight_radius(7).unwrap();
        assert!((r7 - 0.545275).abs() < 1e-6);
        assert!((r7.cosh() - 1.152382).abs() < 1e-6);
        let mut prev = 0.0;
        for m in 7..200 {
            let r = tight_radius(m).unwrap();
            let s = (PI / m as f64).sin();
            assert!((r.cosh() - 1.0 / (2.0 * s)).abs() < 1e-12 * r.cosh());
            // law of cosines for the equilateral triangle of side 2r
            let c = (2.0 * r).cosh();
            let cos_angle = (c * c - c) / ((2.0 * r).sinh().powi(2));
            assert!((cos_angle.acos() - 2.0 * PI / m as f64).abs() < 1e-9);
            assert!(r > prev);
            prev = r;
        }
        assert!(tight_radius(6).is_err());
        assert!(tight_density_formula(3).is_err());
    }

    #[test]
    fn density_values() {
        assert!((tight_density_formula(7).unwrap() - 0.914_294_6).abs() < 1e-7);
        assert!((tight_density_formula(8).unwrap() - 0.919_688_9).abs() < 1e-7);
        let mut prev = 0.0;
        for m in 7..=64 {
            let f = tight_density_formula(m).unwrap();
            // three sectors of angle 2π/m over the face area π(m-6)/m
            let r = tight_radius(m).unwrap();
            let alt = 3.0 / m as f64 * ball_area(r) / (PI * (m as f64 - 6.0) / m as f64);
            assert!((f - alt).abs() < 1e-12);
            assert!(f > prev);
            prev = f;
        }
    }

    #[test]
    fn seed_neighbourhood() {
        let b = BallSpec::at_origin(1.2).unwrap();
        assert_eq!(tight_centers_in_ball(7, &b).unwrap().len(), 8);
        let t = TightPacking::new(7).unwrap();
        for n in t.neighbours_of_origin() {
            assert!((distance(n, &HPoint::ORIGIN) - 2.0 * t.radius()).abs() < 1e-12);
        }
        for w in t.neighbours_of_origin().windows(2) {
            assert!((distance(&w[0], &w[1]) - 2.0 * t.radius()).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_vertices_have_m_neighbours() {
        for m in [7u32, 9] {
            let t = TightPacking::new(m).unwrap();
            let b = BallSpec::new(HPoint::new(0.3, 2.0), 5.5).unwrap();
            let pts = t.centers_in_ball(&b).unwrap();
            let idx = PointIndex::from_points(pts.iter().copied(), t.radius());
            let mut interior = 0;
            for p in &pts {
                if distance(p, &b.center) > b.radius - 2.0 * t.radius() - 0.1 {
                    continue;
                }
                interior += 1;
                let near = idx.within(p, 2.0 * t.radius() + 1e-6);
                assert_eq!(near.len(), m as usize + 1);
                for (_, d) in near {
                    assert!(d < 1e-12 || (d - 2.0 * t.radius()).abs() < 1e-9);
                }
            }
            assert!(interior > 20);
        }
    }

    #[test]
    fn window_audit_and_bound() {
        let t = TightPacking::new(7).unwrap();
        let b = BallSpec::new(HPoint::new(-2.0, 0.5), 5.0).unwrap();
        let disks = t.bodies_in_ball(&b).unwrap();
        assert!(disjointness_gap(&disks) >= -1e-9);
        let inside = disks.iter().filter(|d| distance(&d.center, &b.center) + d.radius <= b.radius).count();
        assert!(inside as f64 * ball_area(t.radius()) < b.area());
    }

    #[test]
    fn greedy_nearest_matches_enumeration() {
        let t = TightPacking::new(8).unwrap();
        let b = BallSpec::at_origin(5.0).unwrap();
        let pts = t.frames_within(&b.center, 7.0).unwrap();
        let idx = PointIndex::from_points(pts.iter().map(|p| p.1), t.radius());
        let s = crate::rng::SampleStream::new(11);
        for i in 0..2000 {
            let mut r = s.at(i);
            let q = crate::regions::ball_point(&b, r.uniform(), r.uniform());
            let (_, d) = t.nearest_vertex(&q);
            let (_, d2) = idx.nearest(&q).unwrap();
            assert!((d - d2).abs() < 1e-9, "{d} vs {d2}");
        }
    }

    #[test]
    fn rotation_about_a_vertex_permutes_centres() {
        let t = TightPacking::new(7).unwrap();
        let b = BallSpec::at_origin(5.0).unwrap();
        let pts = t.centers_in_ball(&b).unwrap();
        let v = pts.iter().find(|p| (distance(p, &b.center) - 2.0 * t.radius()).abs() < 1e-9).unwrap();
        let g = Isometry::rotation(v, 2.0 * PI / 7.0);
        let idx = PointIndex::from_points(pts.iter().copied(), t.radius());
        let mut checked = 0;
        for p in &pts {
            let q = g.apply(p).unwrap();
            if distance(&q, &b.center) < b.radius - 0.01 {
                assert!(idx.nearest(&q).unwrap().1 < 1e-6);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn fundamental_triangle() {
        let t = TightPacking::new(7).unwrap();
        let fd = t.fundamental_domain().unwrap();
        assert!((fd.polygon.area() - PI / 7.0).abs() < 1e-12);
        for a in fd.polygon.interior_angles() {
            assert!((a - 2.0 * PI / 7.0).abs() < 1e-12);
        }
        let dens = fd.covered_area() / fd.polygon.area();
        assert!((dens - tight_density_formula(7).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn window_guard() {
        let t = TightPacking::new(7).unwrap();
        assert!(t.centers_in_ball(&BallSpec::at_origin(20.5).unwrap()).is_err());
    }
}
