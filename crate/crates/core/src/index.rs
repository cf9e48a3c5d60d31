//! Spatial hash for half-plane points.
//!
//! Buckets are cells of roughly constant hyperbolic size: rows are bands of
//! `ln y` of height `cell`, and a row at height `e^{iy cell}` is cut into
//! columns of Euclidean width `cell * e^{iy cell}`.

use std::collections::HashMap;

use crate::hgeom::{distance, HPoint};

#[derive(Debug, Clone)]
pub struct PointIndex {
    cell: f64,
    points: Vec<HPoint>,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl PointIndex {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0, "cell size must be positive");
        PointIndex { cell, points: Vec::new(), buckets: HashMap::new() }
    }

    pub fn from_points(points: impl IntoIterator<Item = HPoint>, cell: f64) -> Self {
        let mut idx = PointIndex::new(cell);
        for p in points {
            idx.insert(p);
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn insert(&mut self, p: HPoint) -> usize {
        let id = self.points.len();
        let key = self.key(&p);
        self.points.push(p);
        self.buckets.entry(key).or_default().push(id as u32);
        id
    }

    fn row(&self, log_y: f64) -> i64 {
        (log_y / self.cell).floor() as i64
    }

    fn column(&self, x: f64, row: i64) -> i64 {
        let width = self.cell * (row as f64 * self.cell).exp();
        (x / width).floor().clamp(i64::MIN as f64 / 2.0, i64::MAX as f64 / 2.0) as i64
    }

    fn key(&self, p: &HPoint) -> (i64, i64) {
        let row = self.row(p.log_y());
        (row, self.column(p.x(), row))
    }

    /// Visits points within `radius` of `p` until `visit` returns `true`.
    fn scan(&self, p: &HPoint, radius: f64, mut visit: impl FnMut(usize, f64) -> bool) -> bool {
        let (ly, y) = (p.log_y(), p.y());
        // Euclidean circle of the ball: centre height k, radius r
        let (k, r) = (y * radius.cosh(), y * radius.sinh());
        for row in self.row(ly - radius)..=self.row(ly + radius) {
            let (ya, yb) = ((row as f64 * self.cell).exp(), ((row + 1) as f64 * self.cell).exp());
            let dy = if k < ya { ya - k } else if k > yb { k - yb } else { 0.0 };
            let half = if dy >= r { 0.0 } else { (r - dy).sqrt() * (r + dy).sqrt() };
            let c0 = self.column(p.x() - half, row);
            let c1 = self.column(p.x() + half, row);
            for col in c0..=c1 {
                if let Some(ids) = self.buckets.get(&(row, col)) {
                    for &id in ids {
                        let d = distance(p, &self.points[id as usize]);
                        if d <= radius && visit(id as usize, d) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Calls `visit(id, distance)` for every stored point within `radius` of `p`.
    pub fn for_each_within(&self, p: &HPoint, radius: f64, mut visit: impl FnMut(usize, f64)) {
        self.scan(p, radius, |i, d| {
            visit(i, d);
            false
        });
    }

    pub fn within(&self, p: &HPoint, radius: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        self.for_each_within(p, radius, |i, d| out.push((i, d)));
        out
    }

    pub fn any_within(&self, p: &HPoint, radius: f64) -> bool {
        self.scan(p, radius, |_, _| true)
    }

    /// Nearest stored point and its distance.
    pub fn nearest(&self, p: &HPoint) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut radius = self.cell;
        loop {
            let mut best: Option<(usize, f64)> = None;
            self.for_each_within(p, radius, |i, d| {
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            });
            if best.is_some() {
                return best;
            }
            if radius > 1500.0 {
                // beyond double range: fall back to a scan
                return self
                    .points
                    .iter()
                    .enumerate()
                    .map(|(i, q)| (i, distance(p, q)))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
            }
            radius *= 1.5;
        }
    }
}
