//! Densities of packings in the hyperbolic plane.
//!
//! The crate builds the packings and regions used to study how density
//! behaves on expanding balls in the upper half-plane (stripe model,
//! half-space, Böröczky packing, tight-radius `{3,m}` packings, horoball
//! bricks, plus two Euclidean comparison cases), measures their coverage
//! curves by quadrature or deterministic Monte Carlo, and checks the
//! fundamental-domain, Voronoi-cell and ball-average routes to the same
//! density against each other.

// `!(x > 0.0)` is how NaN is rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod config;
pub mod density;
pub mod error;
pub mod formats;
pub mod hgeom;
pub mod index;
pub mod packings;
pub mod pspace;
pub mod quad;
pub mod regions;
pub mod rng;
pub mod voronoi;

pub use config::Tolerances;
pub use error::{HypackError, Result};
pub use hgeom::{BallSpec, EPoint, GeodesicPolygon, HDisk, HPoint, Isometry};
