use super::Packing;
use crate::error::Result;
use crate::hgeom::{BallSpec, HDisk, HPoint};
use crate::index::PointIndex;
use crate::regions::Region;

/// An explicit finite list of disks.
#[derive(Debug, Clone)]
pub struct DiskSet {
    disks: Vec<HDisk>,
    index: PointIndex,
    max_radius: f64,
    label: String,
}

impl DiskSet {
    pub fn new(disks: Vec<HDisk>, label: impl Into<String>) -> Self {
        let max_radius = disks.iter().map(|d| d.radius).fold(0.0, f64::max);
        let index = PointIndex::from_points(disks.iter().map(|d| d.center), max_radius.max(0.25));
        DiskSet { disks, index, max_radius, label: label.into() }
    }

    pub fn disks(&self) -> &[HDisk] {
        &self.disks
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }
}

impl Region for DiskSet {
    fn contains(&self, p: &HPoint) -> bool {
        let mut hit = false;
        self.index.for_each_within(p, self.max_radius, |i, d| hit |= d <= self.disks[i].radius);
        hit
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

impl Packing for DiskSet {
    fn bodies_in_ball(&self, b: &BallSpec) -> Result<Vec<HDisk>> {
        let mut out = Vec::new();
        self.index.for_each_within(&b.center, b.radius + self.max_radius, |i, d| {
            if d <= b.radius + self.disks[i].radius {
                out.push(self.disks[i]);
            }
        });
        Ok(out)
    }
}
