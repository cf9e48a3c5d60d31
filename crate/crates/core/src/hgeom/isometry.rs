use serde::{Deserialize, Serialize};

use super::point::HPoint;
use crate::error::{HypackError, Result};

/// Orientation-preserving isometry `z -> (az + b) / (cz + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// The congruences used to build and move packings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsometryKind {
    /// `(x, y) -> (x + t, y)`
    HTranslation(f64),
    /// `(x, y) -> (lambda x, lambda y)`
    Dilation(f64),
    /// Counter-clockwise rotation by `angle` about `center`.
    Rotation { center: HPoint, angle: f64 },
}

pub fn make_isometry(kind: IsometryKind) -> Result<Isometry> {
    match kind {
        IsometryKind::HTranslation(t) => Ok(Isometry::translation(t)),
        IsometryKind::Dilation(l) => Isometry::dilation(l),
        IsometryKind::Rotation { center, angle } => Ok(Isometry::rotation(&center, angle)),
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Normalizes an arbitrary matrix with positive determinant.
    pub fn from_matrix(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(HypackError::Domain(format!(
                "matrix determinant {det} is not positive"
            )));
        }
        Ok(Isometry { a, b, c, d }.normalized())
    }

    pub fn translation(t: f64) -> Self {
        Isometry { a: 1.0, b: t, c: 0.0, d: 1.0 }
    }

    pub fn dilation(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(HypackError::Domain(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let s = lambda.sqrt();
        Ok(Isometry { a: s, b: 0.0, c: 0.0, d: 1.0 / s })
    }

    /// Rotation about `(0, 1)`: the derivative at `i` is `exp(i angle)`.
    pub fn rotation_at_origin(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Isometry { a: c, b: s, c: -s, d: c }
    }

    pub fn rotation(center: &HPoint, angle: f64) -> Self {
        let to = Isometry::from_origin(center);
        to.compose(&Isometry::rotation_at_origin(angle))
            .compose(&to.inverse())
    }

    /// `z -> y_p z + x_p`, the parabolic-hyperbolic map taking `(0,1)` to `p`.
    pub fn from_origin(p: &HPoint) -> Self {
        let s = (0.5 * p.log_y()).exp();
        Isometry { a: s, b: p.x() / s, c: 0.0, d: 1.0 / s }
    }

    /// Inverse of [`Isometry::from_origin`]: takes `p` to `(0,1)`.
    pub fn to_origin(p: &HPoint) -> Self {
        Isometry::from_origin(p).inverse()
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Rescales to unit determinant and fixes the overall sign.
    pub fn normalized(&self) -> Self {
        let s = self.determinant().sqrt();
        let mut m = Isometry { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s };
        if m.a < 0.0 || (m.a == 0.0 && m.c < 0.0) {
            m = Isometry { a: -m.a, b: -m.b, c: -m.c, d: -m.d };
        }
        m
    }

    /// `self ∘ other`, renormalized.
    pub fn compose(&self, other: &Isometry) -> Self {
        Isometry {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Self {
        Isometry { a: self.d, b: -self.b, c: -self.c, d: self.a }.normalized()
    }

    /// Entrywise comparison modulo the sign ambiguity of PSL(2, R).
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        let same = (self.a - other.a).abs() <= tol
            && (self.b - other.b).abs() <= tol
            && (self.c - other.c).abs() <= tol
            && (self.d - other.d).abs() <= tol;
        let flipped = (self.a + other.a).abs() <= tol
            && (self.b + other.b).abs() <= tol
            && (self.c + other.c).abs() <= tol
            && (self.d + other.d).abs() <= tol;
        same || flipped
    }

    /// Image of a point. Images closer to the real axis than `1e-300`
    /// are rejected.
    pub fn apply(&self, p: &HPoint) -> Result<HPoint> {
        let q = self.apply_unchecked(p);
        if q.log_y() < (1e-300f64).ln() || !q.x().is_finite() {
            return Err(HypackError::Range(format!(
                "image of ({}, {}) falls onto the ideal boundary",
                p.x(),
                p.y()
            )));
        }
        Ok(q)
    }

    pub(crate) fn apply_unchecked(&self, p: &HPoint) -> HPoint {
        let (x, y) = (p.x(), p.y());
        if self.c == 0.0 {
            let x2 = (self.a * x + self.b) / self.d;
            let log_y = p.log_y() + 2.0 * self.a.abs().ln();
            let y2 = y * (self.a / self.d);
            let y2 = if y2.is_normal() { y2 } else { log_y.exp() };
            return HPoint::from_parts(x2, y2, log_y);
        }
        let re = self.c * x + self.d;
        let im = self.c * y;
        let modulus = re.hypot(im);
        let log_y = p.log_y() - 2.0 * modulus.ln();
        let den = modulus * modulus;
        let x2 = if den.is_finite() && den > 1e-280 {
            ((self.a * x + self.b) * re + self.a * self.c * y * y) / den
        } else {
            self.a / self.c - re / (self.c * modulus) / modulus
        };
        let y2 = y / den;
        let y2 = if y2.is_normal() { y2 } else { log_y.exp() };
        HPoint::from_parts(x2, y2, log_y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::distance;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn identity_fixes_points() {
        let p = HPoint::new(0.3, 2.0);
        let q = Isometry::IDENTITY.apply(&p).unwrap();
        assert_eq!(q.x(), 0.3);
        assert_eq!(q.y(), 2.0);
    }

    #[test]
    fn dilation_and_translation() {
        let g = Isometry::dilation(E * E).unwrap();
        assert_relative_eq!(g.a, E, epsilon = 1e-15);
        assert_relative_eq!(g.d, 1.0 / E, epsilon = 1e-15);
        let q = g.apply(&HPoint::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(q.y(), E * E, epsilon = 1e-14);
        assert_eq!(q.x(), 0.0);

        let t = Isometry::translation(5.0);
        let q = t.apply(&HPoint::new(1.0, 1.0)).unwrap();
        assert_eq!((q.x(), q.y()), (6.0, 1.0));
        assert_eq!(make_isometry(IsometryKind::HTranslation(1.0)).unwrap(), Isometry {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            d: 1.0
        });
    }

    #[test]
    fn nonpositive_dilation_rejected() {
        assert!(make_isometry(IsometryKind::Dilation(0.0)).is_err());
        assert!(make_isometry(IsometryKind::Dilation(-2.0)).is_err());
    }

    #[test]
    fn half_turn_about_origin() {
        let g = make_isometry(IsometryKind::Rotation { center: HPoint::ORIGIN, angle: PI }).unwrap();
        let q = g.apply(&HPoint::new(0.0, E)).unwrap();
        assert!(q.x().abs() < 1e-15);
        assert_relative_eq!(q.y(), 1.0 / E, epsilon = 1e-15);
    }

    #[test]
    fn rotation_fixes_its_center() {
        let c = HPoint::new(-1.5, 0.25);
        let g = Isometry::rotation(&c, 1.1);
        let q = g.apply(&c).unwrap();
        assert!(distance(&c, &q) < 1e-12);
        let p = HPoint::new(0.2, 0.7);
        let gp = g.apply(&p).unwrap();
        assert_relative_eq!(distance(&c, &p), distance(&c, &gp), epsilon = 1e-12);
        assert!(distance(&p, &gp) > 0.1);
    }

    #[test]
    fn counter_clockwise_convention() {
        // a quarter turn about i sends the point above i to the left
        let g = Isometry::rotation_at_origin(PI / 2.0);
        let q = g.apply(&HPoint::new(0.0, 2.0)).unwrap();
        assert!(q.x() < 0.0);
    }

    #[test]
    fn image_on_boundary_is_range_error() {
        // z -> -1/z sends points near 0 to infinity, and points near infinity
        // to the real axis.
        let g = Isometry { a: 0.0, b: 1.0, c: -1.0, d: 0.0 };
        let far = HPoint::from_log(1e200, 0.0).unwrap();
        assert!(g.apply(&far).is_err());
    }

    #[test]
    fn group_laws() {
        let g = Isometry::from_matrix(2.0, 3.0, 1.0, 2.5).unwrap();
        let h = Isometry::rotation(&HPoint::new(1.0, 3.0), 0.4);
        assert!(g.compose(&g.inverse()).approx_eq(&Isometry::IDENTITY, 1e-12));
        let lhs = g.compose(&h).inverse();
        let rhs = h.inverse().compose(&g.inverse());
        assert!(lhs.approx_eq(&rhs, 1e-12));
        assert!((g.compose(&h).determinant() - 1.0).abs() < 1e-12);
    }
}
