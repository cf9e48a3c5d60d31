//! Numerical tolerances shared across the crate.
//!
//! Every threshold a module compares against lives here so that a caller can
//! tighten or relax them in one place. `Tolerances::default()` holds the values
//! the library is validated with.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed drift of `ad - bc` from 1 after composing isometries.
    pub determinant: f64,
    /// Relative threshold below which two abscissae define a vertical geodesic.
    pub vertical_geodesic: f64,
    /// Distances below this are the same vertex of a generated tiling.
    pub vertex_dedup: f64,
    /// Candidates closer than this but farther than `vertex_dedup` are an error.
    pub vertex_ambiguity: f64,
    /// Relative accuracy requested from one-dimensional quadrature.
    pub quad_rel: f64,
    /// Slack on gaps between bodies that are meant to be tangent.
    pub disjointness: f64,
    /// Points this close to a Voronoi cell boundary are resampled.
    pub cell_boundary: f64,
    /// Numerical slack for convexity and equidistance checks on polygons.
    pub polygon: f64,
    /// Images of points must stay above this ordinate.
    pub min_ordinate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            determinant: 1e-12,
            vertical_geodesic: 1e-12,
            vertex_dedup: 1e-6,
            vertex_ambiguity: 1e-4,
            quad_rel: 1e-9,
            disjointness: 1e-9,
            cell_boundary: 1e-9,
            polygon: 1e-9,
            min_ordinate: 1e-300,
        }
    }
}

/// Largest radius for which `cosh` stays comfortably inside `f64` range.
pub const MAX_RADIUS: f64 = 600.0;
