//! Density curves over expanding balls, finite-window densities, the ball
//! average `f_R`, fundamental-domain and tile densities, and oscillation
//! diagnostics.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, HypackError, Result};
use crate::hgeom::{angle_of_parallelism, BallSpec, EPoint, HPoint};
use crate::index::PointIndex;
use crate::packings::euclid::EuclidRegion;
use crate::packings::{BrickTile, Packing, Tile};
use crate::regions::{ball_point, count_hits, mc_area_fraction, AreaEstimate, Region, SamplePlan};
use crate::rng::SampleStream;
use crate::voronoi::{cell_relative_density, dirichlet_cell};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveCenter {
    Hyperbolic(HPoint),
    Euclidean(EPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "mc")]
    Mc,
    #[serde(rename = "quadrature")]
    Quadrature,
    #[serde(rename = "closed-form")]
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub radius: f64,
    pub fraction: f64,
    pub std_error: f64,
    pub samples: u64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub center: CurveCenter,
    pub points: Vec<CurvePoint>,
}

impl DensityCurve {
    pub fn fractions(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.fraction).collect()
    }

    pub fn last(&self) -> Option<&CurvePoint> {
        self.points.last()
    }
}

/// Whether exact areas may replace sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    #[default]
    Auto,
    ForceMc,
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return domain("at least one radius is required");
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("radii must be positive and strictly increasing");
    }
    Ok(())
}

/// Covered fraction of `B_R(center)` for each radius. Radius `i` is sampled
/// with seed `plan.seed + i`.
pub fn density_curve(
    target: &dyn Region,
    center: &HPoint,
    radii: &[f64],
    plan: &SamplePlan,
    eval: Evaluation,
) -> Result<DensityCurve> {
    check_radii(radii)?;
    let mut points = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let b = BallSpec::new(*center, r)?;
        let exact = match eval {
            Evaluation::Auto => target.exact_area_in_ball(&b).transpose()?,
            Evaluation::ForceMc => None,
        };
        let point = match exact {
            Some(a) => CurvePoint {
                radius: r,
                fraction: (a / b.area()).clamp(0.0, 1.0),
                std_error: 0.0,
                samples: 0,
                method: Method::Quadrature,
            },
            None => {
                let est = mc_area_fraction(target, &b, &plan.reseeded(plan.seed.wrapping_add(i as u64)));
                CurvePoint {
                    radius: r,
                    fraction: est.fraction,
                    std_error: est.std_error,
                    samples: est.samples_used,
                    method: Method::Mc,
                }
            }
        };
        points.push(point);
    }
    Ok(DensityCurve { center: CurveCenter::Hyperbolic(*center), points })
}

/// Density curve of a Euclidean region over disks about the origin.
pub fn euclid_density_curve(
    target: &dyn EuclidRegion,
    radii: &[f64],
    plan: &SamplePlan,
    eval: Evaluation,
) -> Result<DensityCurve> {
    check_radii(radii)?;
    let mut points = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let exact = match eval {
            Evaluation::Auto => target.exact_fraction_in_disk(r),
            Evaluation::ForceMc => None,
        };
        points.push(match exact {
            Some(f) => CurvePoint { radius: r, fraction: f, std_error: 0.0, samples: 0, method: Method::ClosedForm },
            None => {
                let hits = count_hits(plan.seed.wrapping_add(i as u64), plan.samples, 1, |_, rng| {
                    let rho = r * rng.uniform().sqrt();
                    let (s, c) = (2.0 * PI * rng.uniform()).sin_cos();
                    target.contains(&EPoint::new(rho * c, rho * s))
                });
                let est = AreaEstimate::from_hits(hits[0], plan.samples);
                CurvePoint {
                    radius: r,
                    fraction: est.fraction,
                    std_error: est.std_error,
                    samples: plan.samples,
                    method: Method::Mc,
                }
            }
        });
    }
    Ok(DensityCurve { center: CurveCenter::Euclidean(EPoint::new(0.0, 0.0)), points })
}

/// Average of the covered indicator at the origin over the lift of `B_R`,
/// which reduces to the covered fraction of `B_R((0,1))`.
pub fn f_r_average(p: &dyn Region, radius: f64, plan: &SamplePlan) -> Result<AreaEstimate> {
    let b = BallSpec::new(HPoint::ORIGIN, radius)?;
    Ok(mc_area_fraction(p, &b, plan))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub liminf_est: f64,
    pub limsup_est: f64,
    pub window: (f64, f64),
    pub converged: bool,
    pub tolerance: f64,
}

/// Min and max of the trailing `window_fraction` of the curve.
pub fn oscillation_report(c: &DensityCurve, window_fraction: f64, tolerance: f64) -> Result<OscillationReport> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return domain(format!("window fraction {window_fraction} must lie in (0, 1]"));
    }
    let n = c.points.len();
    let take = ((n as f64) * window_fraction).ceil() as usize;
    if take < 4 {
        return domain(format!("trailing window holds {take} points; at least 4 are needed"));
    }
    let tail = &c.points[n - take..];
    let lo = tail.iter().map(|p| p.fraction).fold(f64::INFINITY, f64::min);
    let hi = tail.iter().map(|p| p.fraction).fold(f64::NEG_INFINITY, f64::max);
    Ok(OscillationReport {
        liminf_est: lo,
        limsup_est: hi,
        window: (tail[0].radius, tail[take - 1].radius),
        converged: hi - lo <= tolerance,
        tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Near,
    Far,
}

/// Limiting covered fraction of balls about a centre at distance `t` from the
/// geodesic bounding a half-plane, on the centre's side (`Near`) or not.
pub fn halfspace_density_limit(t: f64, side: Side) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("distance {t} must be non-negative"));
    }
    let far = angle_of_parallelism(t) / PI;
    Ok(match side {
        Side::Near => 1.0 - far,
        Side::Far => far,
    })
}

/// Covered fraction of a fundamental domain.
pub fn fundamental_domain_density(p: &dyn Packing) -> Result<f64> {
    let fd = p
        .fundamental_domain()
        .ok_or_else(|| HypackError::Unsupported(format!("{} has no cocompact fundamental domain", p.label())))?;
    Ok(fd.covered_area() / fd.polygon.area())
}

/// Monte Carlo covered fraction of a tile.
pub fn tile_density(p: &dyn Region, tile: &dyn Tile, plan: &SamplePlan) -> Result<AreaEstimate> {
    if !(tile.area() > 0.0) {
        return domain("tile has zero area");
    }
    let hits = count_hits(plan.seed, plan.samples, 1, |_, rng| p.contains(&tile.sample(rng)));
    Ok(AreaEstimate::from_hits(hits[0], plan.samples))
}

/// Covered fraction of a brick from exact disk-brick intersection areas.
pub fn brick_density_exact(p: &dyn Packing, tile: &BrickTile) -> Result<f64> {
    let mut covered = 0.0;
    for d in p.bodies_in_ball(&tile.bounding_ball())? {
        let ball = BallSpec { center: d.center, radius: d.radius };
        if let Some(a) = tile.exact_area_in_ball(&ball) {
            covered += a?;
        }
    }
    Ok(covered / tile.area())
}

/// Covered fraction of the square `[-side/2, side/2]^2`.
pub fn euclid_window_density(p: &dyn EuclidRegion, side: f64, plan: &SamplePlan) -> Result<AreaEstimate> {
    if !(side > 0.0) {
        return domain(format!("window side {side} must be positive"));
    }
    let hits = count_hits(plan.seed, plan.samples, 1, |_, rng| {
        let x = side * (rng.uniform() - 0.5);
        let y = side * (rng.uniform() - 0.5);
        p.contains(&EPoint::new(x, y))
    });
    Ok(AreaEstimate::from_hits(hits[0], plan.samples))
}

/// Mean, over area-uniform points `q` of `window`, of the covered fraction of
/// the Voronoi cell containing `q`. Points within `1e-9` of a cell boundary
/// are redrawn.
pub fn mass_transport_check(
    p: &dyn Packing,
    window: &BallSpec,
    plan: &SamplePlan,
    search_radius: f64,
) -> Result<AreaEstimate> {
    // a certified cell has every vertex within search_radius / 2 of its site,
    // so every window point has its nearest site within this reach
    let owner_reach = window.radius + 0.5 * search_radius;
    let near = p.bodies_in_ball(&BallSpec { center: window.center, radius: owner_reach })?;
    if near.is_empty() {
        return domain("no bodies near the window");
    }
    let near_index = PointIndex::from_points(near.iter().map(|d| d.center), 0.5);
    let stream = SampleStream::new(plan.seed);
    let owners: Vec<usize> = (0..plan.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.at(i);
            loop {
                let q = ball_point(window, rng.uniform(), rng.uniform());
                let (j, d) = near_index.nearest(&q).expect("sites are non-empty");
                if near_index.within(&q, d + 1e-9).len() == 1 {
                    return j;
                }
            }
        })
        .collect();
    let farthest = owners
        .iter()
        .map(|&j| crate::hgeom::distance(&near[j].center, &window.center))
        .fold(0.0, f64::max);
    let bodies = p.bodies_in_ball(&BallSpec { center: window.center, radius: farthest + search_radius })?;
    let sites: Vec<HPoint> = bodies.iter().map(|d| d.center).collect();
    let index = PointIndex::from_points(sites.iter().copied(), 0.5);
    let mut counts: HashMap<usize, u64> = HashMap::new();
    for &j in &owners {
        *counts.entry(j).or_default() += 1;
    }
    let ids: Vec<usize> = counts.keys().copied().collect();
    let densities: Vec<(usize, f64)> = ids
        .par_iter()
        .map(|&j| {
            let site = near[j].center;
            let others: Vec<HPoint> = index.within(&site, search_radius).into_iter().map(|(k, _)| sites[k]).collect();
            let local = others
                .iter()
                .position(|s| crate::hgeom::distance(s, &site) < 1e-9)
                .ok_or_else(|| HypackError::Domain("window enumeration lost a site".into()))?;
            let cell = dirichlet_cell(&others, local, search_radius)?;
            Ok((j, cell_relative_density(&cell, near[j].radius)?))
        })
        .collect::<Result<_>>()?;
    let n = plan.samples as f64;
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for (j, f) in densities {
        let c = counts[&j] as f64;
        sum += c * f;
        sum2 += c * f * f;
    }
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    Ok(AreaEstimate { fraction: mean, std_error: (var / n).sqrt(), samples_used: plan.samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{ball_area, distance, Isometry};
    use crate::packings::euclid::{AnnulusSet, EmptyEuclid, LatticeDisks};
    use crate::packings::{
        tight_density_formula, BoroczkyPacking, BrickFamily, DiskSet, HalfSpace, StripeModel, TightPacking,
        Transformed,
    };
    use crate::regions::{quad_black_fraction, FullPlane};

    #[test]
    fn full_plane_curve() {
        let plan = SamplePlan::new(1, 2000).unwrap();
        let c = density_curve(&FullPlane, &HPoint::ORIGIN, &[1.0, 2.0, 5.0], &plan, Evaluation::Auto).unwrap();
        assert!(c.points.iter().all(|p| p.fraction == 1.0));
        assert!(density_curve(&FullPlane, &HPoint::ORIGIN, &[2.0, 1.0], &plan, Evaluation::Auto).is_err());
    }

    #[test]
    fn stripe_curve_mc_matches_quadrature() {
        let s = StripeModel::new(5.0).unwrap();
        let radii: Vec<f64> = (2..=5).map(|n| (n as f64 + 0.5) * 5.0).collect();
        let plan = SamplePlan::new(4, 100_000).unwrap();
        let mc = density_curve(&s, &HPoint::ORIGIN, &radii, &plan, Evaluation::ForceMc).unwrap();
        let ex = density_curve(&s, &HPoint::ORIGIN, &radii, &plan, Evaluation::Auto).unwrap();
        for (a, b) in mc.points.iter().zip(&ex.points) {
            assert_eq!(b.method, Method::Quadrature);
            assert!((b.fraction - quad_black_fraction(b.radius, 5.0).unwrap()).abs() < 1e-12);
            assert!((a.fraction - b.fraction).abs() <= 4.0 * a.std_error + 1e-9);
        }
    }

    #[test]
    fn stripe_covered_area_is_monotone() {
        let s = StripeModel::new(2.0).unwrap();
        let mut prev = 0.0;
        for i in 1..60 {
            let r = 0.25 * i as f64;
            let b = BallSpec::at_origin(r).unwrap();
            let a = s.exact_area_in_ball(&b).unwrap().unwrap();
            assert!(a >= prev - 1e-9 * a);
            prev = a;
        }
    }

    #[test]
    fn stripe_oscillates_at_critical_radii() {
        let s = StripeModel::new(5.0).unwrap();
        let radii: Vec<f64> = (2..=7).map(|n| (n as f64 + 0.5) * 5.0).collect();
        let plan = SamplePlan::new(0, 10).unwrap();
        let c = density_curve(&s, &HPoint::ORIGIN, &radii, &plan, Evaluation::Auto).unwrap();
        let rep = oscillation_report(&c, 1.0, 0.05).unwrap();
        assert!(rep.limsup_est - rep.liminf_est >= 1.0 / 3.0);
        assert!(!rep.converged);
    }

    #[test]
    fn annulus_oscillation() {
        let radii: Vec<f64> = (2..=12).map(|k| 2f64.powi(k)).collect();
        let plan = SamplePlan::new(0, 10).unwrap();
        let c = euclid_density_curve(&AnnulusSet, &radii, &plan, Evaluation::Auto).unwrap();
        assert!(c.points.iter().all(|p| p.method == Method::ClosedForm && p.std_error == 0.0));
        let rep = oscillation_report(&c, 0.5, 0.01).unwrap();
        assert!((rep.limsup_est - 0.8).abs() < 0.01);
        assert!((rep.liminf_est - 0.2).abs() < 0.01);
        let mc = euclid_density_curve(&AnnulusSet, &[16.0, 32.0], &SamplePlan::new(3, 200_000).unwrap(), Evaluation::ForceMc)
            .unwrap();
        for (a, b) in mc.points.iter().zip(&c.points[2..4]) {
            assert!((a.fraction - b.fraction).abs() < 4.0 * a.std_error);
        }
    }

    #[test]
    fn oscillation_report_edges() {
        let points = (1..=8)
            .map(|i| CurvePoint { radius: i as f64, fraction: 0.3, std_error: 0.0, samples: 0, method: Method::Mc })
            .collect();
        let c = DensityCurve { center: CurveCenter::Hyperbolic(HPoint::ORIGIN), points };
        let rep = oscillation_report(&c, 0.5, 1e-12).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.liminf_est, rep.limsup_est);
        assert!(oscillation_report(&c, 0.25, 0.1).is_err());
    }

    #[test]
    fn halfspace_limits() {
        assert_eq!(halfspace_density_limit(0.0, Side::Near).unwrap(), 0.5);
        let near = halfspace_density_limit(1.0, Side::Near).unwrap();
        assert!((near - (1.0 - 2.0 * (-1f64).exp().atan() / PI)).abs() < 1e-15);
        assert!((halfspace_density_limit(40.0, Side::Near).unwrap() - 1.0).abs() < 1e-15);
        assert!(halfspace_density_limit(-1.0, Side::Far).is_err());
        // (e, 1) is at distance asinh(e) from x = 0, so use (sinh 1, 1)
        let c = HPoint::new(1f64.sinh(), 1.0);
        let est = mc_area_fraction(&HalfSpace, &BallSpec::new(c, 12.0).unwrap(), &SamplePlan::new(2, 100_000).unwrap());
        assert!((est.fraction - near).abs() < 0.02);
    }

    #[test]
    fn empty_packing_average() {
        let empty = DiskSet::new(vec![], "empty");
        let est = f_r_average(&empty, 4.0, &SamplePlan::new(1, 1000).unwrap()).unwrap();
        assert_eq!(est.fraction, 0.0);
    }

    #[test]
    fn fundamental_domain_values() {
        for (m, v) in [(7u32, 0.914_294_6), (8, 0.919_688_9)] {
            let t = TightPacking::new(m).unwrap();
            let d = fundamental_domain_density(&t).unwrap();
            assert!((d - tight_density_formula(m).unwrap()).abs() < 1e-12);
            assert!((d - v).abs() < 1e-7);
        }
        assert!(matches!(fundamental_domain_density(&BoroczkyPacking::maximal()), Err(HypackError::Unsupported(_))));
    }

    #[test]
    fn triangle_tile_matches_fundamental_domain() {
        let t = TightPacking::new(7).unwrap();
        let tri = t.face_triangle();
        let est = tile_density(&t, &tri, &SamplePlan::new(6, 200_000).unwrap()).unwrap();
        let exact = fundamental_domain_density(&t).unwrap();
        assert!((est.fraction - exact).abs() < 4.0 * est.std_error);
    }

    #[test]
    fn brick_tile_densities() {
        let p = BoroczkyPacking::maximal();
        let plan = SamplePlan::new(8, 200_000).unwrap();
        let base = ball_area(p.radius) / (0.5f64.exp() * (1.0 - (-2f64).exp()));
        let f0 = BrickFamily::new(0.0, 0.5f64.exp()).unwrap();
        let f1 = BrickFamily::new(1.0, 1.5f64.exp()).unwrap();
        for (j, k) in [(0, 0), (-1, 3), (2, -5)] {
            let e0 = brick_density_exact(&p, &f0.tile(j, k)).unwrap();
            let e1 = brick_density_exact(&p, &f1.tile(j, k)).unwrap();
            assert!((e0 / base - 1.0).abs() < 1e-8, "{e0} {base}");
            assert!((e0 / e1 - 1f64.exp()).abs() < 1e-7);
        }
        let m0 = tile_density(&p, &f0.tile(0, 0), &plan).unwrap();
        assert!((m0.fraction - base).abs() < 4.0 * m0.std_error);
    }

    #[test]
    fn euclid_window() {
        let plan = SamplePlan::new(2, 200_000).unwrap();
        let l = LatticeDisks::new(1.0, 0.5).unwrap();
        let one = euclid_window_density(&l, 1.0, &plan).unwrap();
        assert!((one.fraction - PI / 4.0).abs() < 4.0 * one.std_error);
        let big = euclid_window_density(&l, 41.0, &plan).unwrap();
        assert!((big.fraction - PI / 4.0).abs() < 4.0 * big.std_error + 0.01);
        let quarter = euclid_window_density(&LatticeDisks::new(1.0, 0.25).unwrap(), 1.0, &plan).unwrap();
        assert!((quarter.fraction - PI / 16.0).abs() < 4.0 * quarter.std_error);
        assert_eq!(euclid_window_density(&EmptyEuclid, 10.0, &plan).unwrap().fraction, 0.0);
    }

    #[test]
    fn centre_equivariance() {
        let t = TightPacking::new(7).unwrap();
        let g = Isometry::from_matrix(1.3, 0.4, 0.2, 0.83846153846).unwrap();
        let moved = Transformed::new(t.clone(), g);
        let plan = SamplePlan::new(12, 60_000).unwrap();
        let c = HPoint::new(0.2, 1.4);
        let gc = g.apply(&c).unwrap();
        let a = density_curve(&t, &c, &[2.0, 4.0], &plan, Evaluation::Auto).unwrap();
        let b = density_curve(&moved, &gc, &[2.0, 4.0], &plan.reseeded(99), Evaluation::Auto).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert!((x.fraction - y.fraction).abs() <= 4.0 * x.std_error.hypot(y.std_error));
        }
    }

    #[test]
    fn mass_transport_small_window() {
        let t = TightPacking::new(7).unwrap();
        let plan = SamplePlan::new(3, 20_000).unwrap();
        let est = mass_transport_check(&t, &BallSpec::at_origin(3.0).unwrap(), &plan, 6.0 * t.radius()).unwrap();
        assert!((est.fraction - tight_density_formula(7).unwrap()).abs() < 1e-9);
        // a window inside one cell sees only that cell
        let inner = BallSpec::at_origin(0.2).unwrap();
        let one = mass_transport_check(&t, &inner, &plan, 6.0 * t.radius()).unwrap();
        assert!((one.fraction - tight_density_formula(7).unwrap()).abs() < 1e-9);
        assert!(distance(&inner.center, &HPoint::ORIGIN) < 1e-12);
    }
}
