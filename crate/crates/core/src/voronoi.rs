//! Dirichlet-Voronoi cells of point sites and cell-relative densities.
//!
//! A cell is clipped in the Klein model centred on its site, where the
//! half-plane of points closer to the site than to another site `Q` is the
//! linear condition `Q1 kx + Q2 ky < Q0 - 1` on hyperboloid coordinates of `Q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HypackError, Result};
use crate::hgeom::hyperboloid::Hv;
use crate::hgeom::{ball_area, distance, BallSpec, GeodesicPolygon, HPoint, Isometry};
use crate::index::PointIndex;
use crate::regions::{count_hits, ball_point, SamplePlan};

#[derive(Debug, Clone)]
pub struct VoronoiCell {
    pub site: HPoint,
    pub polygon: GeodesicPolygon,
    pub neighbor_sites: Vec<HPoint>,
}

impl VoronoiCell {
    pub fn area(&self) -> f64 {
        self.polygon.area()
    }

    /// Largest distance from the site to a vertex.
    pub fn circumradius(&self) -> f64 {
        self.polygon.vertices().iter().map(|v| distance(&self.site, v)).fold(0.0, f64::max)
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.polygon.contains(p)
    }
}

/// Serialized cell: `{site:{x,y}, vertices:[{x,y}...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRecord {
    pub site: HPoint,
    pub vertices: Vec<HPoint>,
}

impl From<&VoronoiCell> for CellRecord {
    fn from(c: &VoronoiCell) -> Self {
        CellRecord { site: c.site, vertices: c.polygon.vertices().to_vec() }
    }
}

#[derive(Clone, Copy)]
struct KVertex {
    k: [f64; 2],
    /// Half-plane whose line carries the edge leaving this vertex.
    edge: Option<usize>,
}

fn clip(poly: &[KVertex], a: [f64; 2], c: f64, label: usize) -> Vec<KVertex> {
    // keep a·k <= c
    let side = |k: [f64; 2]| a[0] * k[0] + a[1] * k[1] - c;
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let nxt = poly[(i + 1) % n];
        let (sc, sn) = (side(cur.k), side(nxt.k));
        let (cin, nin) = (sc <= 0.0, sn <= 0.0);
        if cin {
            out.push(cur);
        }
        if cin != nin {
            let t = sc / (sc - sn);
            let k = [cur.k[0] + t * (nxt.k[0] - cur.k[0]), cur.k[1] + t * (nxt.k[1] - cur.k[1])];
            out.push(KVertex { k, edge: if cin { Some(label) } else { cur.edge } });
        }
    }
    out
}

/// Drops repeated and collinear vertices left behind by clipping through an
/// existing vertex.
fn tidy(mut poly: Vec<KVertex>) -> Vec<KVertex> {
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let mut removed = false;
        for i in 0..n {
            let a = poly[(i + n - 1) % n].k;
            let b = poly[i].k;
            let c = poly[(i + 1) % n].k;
            let e1 = [b[0] - a[0], b[1] - a[1]];
            let e2 = [c[0] - b[0], c[1] - b[1]];
            let l1 = e1[0].hypot(e1[1]);
            let l2 = e2[0].hypot(e2[1]);
            let cross = e1[0] * e2[1] - e1[1] * e2[0];
            if l1 < 1e-12 || l2 < 1e-12 || cross.abs() <= 1e-12 * l1 * l2 {
                // b sits on the segment a-c: the edge a->c continues the edge leaving a
                poly.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return poly;
        }
    }
}

/// Dirichlet cell of `sites[i]` against every other site within
/// `search_radius`.
///
/// Sites farther than `search_radius` can only affect points farther than
/// `search_radius / 2` from the site, so the result is certified only when
/// every vertex lies within that bound; otherwise the cell is reported as
/// unbounded.
pub fn dirichlet_cell(sites: &[HPoint], i: usize, search_radius: f64) -> Result<VoronoiCell> {
    let site = *sites.get(i).ok_or_else(|| HypackError::Domain(format!("site index {i} out of range")))?;
    let others: Vec<HPoint> = sites
        .iter()
        .enumerate()
        .filter(|&(j, s)| j != i && distance(s, &site) <= search_radius)
        .map(|(_, s)| *s)
        .collect();
    cell_against(&site, &others, search_radius)
}

fn cell_against(site: &HPoint, others: &[HPoint], search_radius: f64) -> Result<VoronoiCell> {
    let frame = Isometry::to_origin(site);
    let back = frame.inverse();
    let s = 1.1;
    let mut poly: Vec<KVertex> =
        [[-s, -s], [s, -s], [s, s], [-s, s]].iter().map(|&k| KVertex { k, edge: None }).collect();
    for (label, q) in others.iter().enumerate() {
        let d = distance(q, site);
        if d == 0.0 {
            return Err(HypackError::Domain("coincident sites".into()));
        }
        let h = Hv::from_uhp(&frame.apply_unchecked(q)).0;
        // Q0 - 1 computed without cancellation: Q0 = cosh d
        let rhs = 2.0 * (0.5 * d).sinh().powi(2);
        poly = clip(&poly, [h[1], h[2]], rhs, label);
        if poly.is_empty() {
            return Err(HypackError::Domain("cell clipped to nothing".into()));
        }
    }
    let poly = tidy(poly);
    let unbounded = || HypackError::UnboundedCell { site: format!("({}, {})", site.x(), site.y()), search_radius };
    if poly.len() < 3 || poly.iter().any(|v| v.edge.is_none() || v.k[0].hypot(v.k[1]) >= 1.0 - 1e-12) {
        return Err(unbounded());
    }
    let vertices: Vec<HPoint> =
        poly.iter().map(|v| back.apply_unchecked(&Hv::from_klein(v.k).to_uhp())).collect();
    if vertices.iter().any(|v| 2.0 * distance(v, site) > search_radius) {
        return Err(unbounded());
    }
    let mut neighbor_sites: Vec<HPoint> = Vec::new();
    for v in &poly {
        let q = others[v.edge.expect("bounded cell edges are labelled")];
        if !neighbor_sites.contains(&q) {
            neighbor_sites.push(q);
        }
    }
    let polygon = GeodesicPolygon::new(vertices)?;
    Ok(VoronoiCell { site: *site, polygon, neighbor_sites })
}

/// `ball_area(rho) / area(cell)`, for a disk of radius `rho` about the site
/// that fits inside the cell.
pub fn cell_relative_density(c: &VoronoiCell, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return crate::error::domain(format!("radius {rho} must be non-negative"));
    }
    // tangency points of a generated tiling drift by rounding far from the
    // origin, so allow a little more than the polygon slack
    for e in c.polygon.edges() {
        let gap = e.distance_to(&c.site) - rho;
        if gap < -1e-7 {
            return crate::error::domain(format!("disk of radius {rho} crosses its cell boundary by {}", -gap));
        }
    }
    Ok(ball_area(rho) / c.area())
}

/// Site index with per-site cells, for point location.
pub struct CellComplex {
    pub cells: Vec<VoronoiCell>,
    index: PointIndex,
    reach: f64,
}

impl CellComplex {
    pub fn new(cells: Vec<VoronoiCell>) -> Self {
        let reach = cells.iter().map(VoronoiCell::circumradius).fold(0.0, f64::max);
        let index = PointIndex::from_points(cells.iter().map(|c| c.site), reach.max(0.25));
        CellComplex { cells, index, reach }
    }

    /// Indices of the cells containing `p`.
    pub fn containing(&self, p: &HPoint) -> Vec<usize> {
        let mut out = Vec::new();
        self.index.for_each_within(p, self.reach + 1e-9, |i, _| {
            if self.cells[i].contains(p) {
                out.push(i);
            }
        });
        out
    }

    /// Nearest site and the gap to the second nearest.
    pub fn nearest_site(&self, p: &HPoint) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, f64::INFINITY);
        let mut second = f64::INFINITY;
        self.index.for_each_within(p, self.reach + 1e-9, |i, d| {
            if d < best.1 {
                second = best.1;
                best = (i, d);
            } else if d < second {
                second = d;
            }
        });
        (best.0 != usize::MAX).then_some((best.0, second - best.1))
    }
}

/// Fraction of sample points of `window` lying in exactly one cell.
pub fn partition_audit(cells: &[VoronoiCell], window: &BallSpec, plan: &SamplePlan) -> f64 {
    let complex = CellComplex::new(cells.to_vec());
    let hits = count_hits(plan.seed, plan.samples, 1, |_, rng| {
        let p = ball_point(window, rng.uniform(), rng.uniform());
        complex.containing(&p).len() == 1
    });
    hits[0] as f64 / plan.samples as f64
}

/// Cells of every site within `radius` of `center`, computed against the
/// full site list.
pub fn cells_near(sites: &[HPoint], center: &HPoint, radius: f64, search_radius: f64) -> Result<Vec<VoronoiCell>> {
    let index = PointIndex::from_points(sites.iter().copied(), (search_radius / 4.0).max(0.25));
    let chosen: Vec<usize> = (0..sites.len()).filter(|&i| distance(&sites[i], center) <= radius).collect();
    chosen
        .par_iter()
        .map(|&i| {
            let others: Vec<HPoint> = index
                .within(&sites[i], search_radius)
                .into_iter()
                .filter(|&(j, _)| j != i)
                .map(|(j, _)| sites[j])
                .collect();
            cell_against(&sites[i], &others, search_radius)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packings::{tight_density_formula, TightPacking};
    use std::f64::consts::PI;

    fn tight_sites(m: u32, r: f64) -> (TightPacking, Vec<HPoint>) {
        let t = TightPacking::new(m).unwrap();
        let sites = t.centers_in_ball(&BallSpec::at_origin(r).unwrap()).unwrap();
        (t, sites)
    }

    #[test]
    fn tight_cell_is_regular_heptagon() {
        let (t, sites) = tight_sites(7, 5.0);
        let i = sites.iter().position(|s| distance(s, &HPoint::ORIGIN) < 1e-12).unwrap();
        let cell = dirichlet_cell(&sites, i, 6.0 * t.radius()).unwrap();
        assert_eq!(cell.polygon.vertices().len(), 7);
        assert_eq!(cell.neighbor_sites.len(), 7);
        for a in cell.polygon.interior_angles() {
            assert!((a - 2.0 * PI / 3.0).abs() < 1e-9);
        }
        // Gauss-Bonnet: 5π - 7·(2π/3) = π/3
        assert!((cell.area() - PI / 3.0).abs() < 1e-9);
        let rel = cell_relative_density(&cell, t.radius()).unwrap();
        assert!((rel - tight_density_formula(7).unwrap()).abs() < 1e-9);
        for v in cell.polygon.vertices() {
            let d0 = distance(v, &cell.site);
            for s in &sites {
                assert!(distance(v, s) >= d0 - 1e-8);
            }
        }
    }

    #[test]
    fn two_sites_are_unbounded() {
        let sites = [HPoint::ORIGIN, HPoint::new(0.0, 3.0)];
        assert!(matches!(dirichlet_cell(&sites, 0, 10.0), Err(HypackError::UnboundedCell { .. })));
    }

    #[test]
    fn insufficient_search_radius_is_reported() {
        let (t, sites) = tight_sites(7, 5.0);
        let i = sites.iter().position(|s| distance(s, &HPoint::ORIGIN) < 1e-12).unwrap();
        assert!(dirichlet_cell(&sites, i, 1.5 * t.radius()).is_err());
    }

    #[test]
    fn cell_is_symmetric_under_site_rotation() {
        let (t, sites) = tight_sites(7, 5.0);
        let i = sites.iter().position(|s| distance(s, &HPoint::ORIGIN) < 1e-12).unwrap();
        let cell = dirichlet_cell(&sites, i, 6.0 * t.radius()).unwrap();
        let g = Isometry::rotation(&HPoint::ORIGIN, 2.0 * PI / 7.0);
        let rotated: Vec<HPoint> = sites.iter().map(|s| g.apply(s).unwrap()).collect();
        let cell2 = dirichlet_cell(&rotated, i, 6.0 * t.radius()).unwrap();
        for v in cell2.polygon.vertices() {
            let best = cell.polygon.vertices().iter().map(|w| distance(v, w)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6);
        }
    }

    #[test]
    fn interior_cells_are_congruent_and_average_to_formula() {
        for m in [7u32, 8, 9] {
            let (t, sites) = tight_sites(m, 6.0);
            let search = 6.0 * t.radius();
            let cells = cells_near(&sites, &HPoint::ORIGIN, 6.0 - search - 0.1, search).unwrap();
            assert!(!cells.is_empty());
            let a0 = cells[0].area();
            let mut weighted = 0.0;
            let mut total = 0.0;
            for c in &cells {
                assert!((c.area() - a0).abs() < 1e-9);
                let rel = cell_relative_density(c, t.radius()).unwrap();
                weighted += rel * c.area();
                total += c.area();
            }
            assert!((weighted / total - tight_density_formula(m).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn partition_audit_controls() {
        let (t, sites) = tight_sites(7, 10.0);
        let window = BallSpec::at_origin(6.0).unwrap();
        let search = 6.0 * t.radius();
        let mut cells = cells_near(&sites, &HPoint::ORIGIN, 6.0 + 2.0 * t.radius(), search).unwrap();
        let plan = SamplePlan::new(1, 20_000).unwrap();
        assert!(partition_audit(&cells, &window, &plan) >= 0.999);
        // a small window well inside one cell
        let i = cells.iter().position(|c| distance(&c.site, &HPoint::ORIGIN) < 1e-12).unwrap();
        let inner = BallSpec::at_origin(0.3).unwrap();
        assert_eq!(partition_audit(&cells[i..=i], &inner, &plan), 1.0);
        // deleting the central cell of a small window leaves a hole
        let small = BallSpec::at_origin(1.0).unwrap();
        cells.remove(i);
        assert!(partition_audit(&cells, &small, &plan) < 0.99);
    }

    #[test]
    fn small_radius_density() {
        let (t, sites) = tight_sites(7, 4.0);
        let i = sites.iter().position(|s| distance(s, &HPoint::ORIGIN) < 1e-12).unwrap();
        let cell = dirichlet_cell(&sites, i, 6.0 * t.radius()).unwrap();
        assert_eq!(cell_relative_density(&cell, 0.0).unwrap(), 0.0);
        assert!(cell_relative_density(&cell, 0.7).is_err());
    }
}
