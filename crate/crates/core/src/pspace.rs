//! Hausdorff distance on truncated packings and the packing-space metric
//! `d(P1, P2) = sup_k (1/k) h(B_k ∩ P1, B_k ∩ P2)`, with `B_k` the ball of
//! radius `k` about `(0,1)` and the supremum taken over `k <= k_max`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::hgeom::{distance, BallSpec, HPoint};
use crate::index::PointIndex;
use crate::packings::Packing;
use crate::regions::polar_point;

pub const DEFAULT_K_MAX: u32 = 8;
pub const DEFAULT_SPACING: f64 = 0.03;

/// Point samples of `B_k ∩ P` for `k = 1..=k_max`.
#[derive(Debug, Clone)]
pub struct TruncatedPacking {
    k_max: u32,
    spacing: f64,
    truncations: Vec<Vec<HPoint>>,
}

/// Polar grid of the disk of radius `r` about `c`: rings `h` apart, each
/// with points at most `h` apart, and a ring on the boundary.
fn polar_grid(c: &HPoint, r: f64, h: f64, mut keep: impl FnMut(HPoint)) {
    keep(*c);
    let rings = (r / h).ceil().max(1.0) as usize;
    for i in 1..=rings {
        let rho = r * i as f64 / rings as f64;
        let n = ((2.0 * PI * rho.sinh() / h).ceil() as usize).max(3);
        let phase = if i % 2 == 0 { 0.0 } else { 0.5 };
        for j in 0..n {
            keep(polar_point(c, rho, 2.0 * PI * (j as f64 + phase) / n as f64));
        }
    }
}

impl TruncatedPacking {
    /// Samples each truncation. Disk bodies get per-body grids clipped to
    /// `B_k`; packings without disk bodies are sampled on a grid of `B_k`
    /// filtered by membership.
    pub fn from_packing(p: &dyn Packing, k_max: u32, spacing: f64) -> Result<Self> {
        if k_max < 1 {
            return domain("k_max must be at least 1");
        }
        if !(spacing > 0.0) {
            return domain(format!("grid spacing {spacing} must be positive"));
        }
        let truncations = (1..=k_max)
            .into_par_iter()
            .map(|k| {
                let ball = BallSpec::new(HPoint::ORIGIN, k as f64)?;
                let bodies = p.bodies_in_ball(&ball)?;
                let mut pts = Vec::new();
                if bodies.is_empty() {
                    polar_grid(&ball.center, ball.radius, spacing, |q| {
                        if p.contains(&q) {
                            pts.push(q);
                        }
                    });
                } else {
                    for d in &bodies {
                        polar_grid(&d.center, d.radius, spacing, |q| {
                            if ball.contains(&q) {
                                pts.push(q);
                            }
                        });
                    }
                }
                Ok(pts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedPacking { k_max, spacing, truncations })
    }

    pub fn from_truncations(truncations: Vec<Vec<HPoint>>, spacing: f64) -> Result<Self> {
        if truncations.is_empty() {
            return domain("at least one truncation is required");
        }
        Ok(TruncatedPacking { k_max: truncations.len() as u32, spacing, truncations })
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Samples of `B_k ∩ P`, `1 <= k <= k_max`.
    pub fn truncation(&self, k: u32) -> &[HPoint] {
        &self.truncations[(k - 1) as usize]
    }
}

/// Larger of the two directed sup-inf distances.
pub fn hausdorff_distance(a: &[HPoint], c: &[HPoint]) -> Result<f64> {
    if a.is_empty() || c.is_empty() {
        return domain("Hausdorff distance needs two non-empty sets");
    }
    Ok(directed(a, c).max(directed(c, a)))
}

fn directed(a: &[HPoint], c: &[HPoint]) -> f64 {
    if c.len() < 64 {
        return a
            .iter()
            .map(|p| c.iter().map(|q| distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
    }
    if a == c {
        return 0.0;
    }
    let index = PointIndex::from_points(c.iter().copied(), 0.25);
    let scan = |points: &mut dyn Iterator<Item = &HPoint>, mut h: f64| {
        for p in points {
            if h > 0.0 && index.any_within(p, h) {
                continue;
            }
            h = h.max(index.nearest(p).map_or(f64::INFINITY, |(_, d)| d));
        }
        h
    };
    // a coarse pass first gives a good lower bound to start from
    let h0 = scan(&mut a.iter().step_by(61), 0.0);
    // a point with some neighbour closer than the running maximum cannot
    // raise it, so only the rest need a nearest-neighbour search
    a.par_chunks(512)
        .map(|chunk| scan(&mut chunk.iter(), h0))
        .reduce(|| h0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingDistance {
    pub value: f64,
    /// The `k` attaining the maximum.
    pub argmax_k: u32,
}

/// `max_{k <= k_max} (1/k) h(B_k ∩ P1, B_k ∩ P2)`. A truncation that is empty
/// on exactly one side contributes the diameter bound `2k`; two empty
/// truncations contribute 0.
pub fn packing_distance(p1: &TruncatedPacking, p2: &TruncatedPacking) -> Result<PackingDistance> {
    if p1.k_max != p2.k_max {
        return domain(format!("k_max mismatch: {} vs {}", p1.k_max, p2.k_max));
    }
    let terms: Vec<f64> = (1..=p1.k_max)
        .into_par_iter()
        .map(|k| {
            let (a, c) = (p1.truncation(k), p2.truncation(k));
            let h = match (a.is_empty(), c.is_empty()) {
                (true, true) => 0.0,
                (true, false) | (false, true) => 2.0 * k as f64,
                (false, false) => hausdorff_distance(a, c).expect("both sets are non-empty"),
            };
            h / k as f64
        })
        .collect();
    let (i, &value) = terms
        .iter()
        .enumerate()
        .fold((0, &terms[0]), |best, (i, v)| if *v > *best.1 { (i, v) } else { best });
    Ok(PackingDistance { value, argmax_k: i as u32 + 1 })
}
