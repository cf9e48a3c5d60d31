//! Half-plane primitives: points, isometries, disks, geodesics, polygons.

mod disk;
mod geodesic;
pub(crate) mod hyperboloid;
mod isometry;
mod point;
mod polygon;

pub use disk::{disk_euclidean_form, BallSpec, EuclidCircle, HDisk};
pub use geodesic::{perpendicular_bisector, Geodesic};
pub use isometry::{make_isometry, Isometry, IsometryKind};
pub use point::{angle_of_parallelism, ball_area, distance, EPoint, HPoint};
pub use polygon::{gauss_bonnet_area, polygon_area, GeodesicPolygon};
