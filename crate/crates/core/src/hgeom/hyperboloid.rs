//! Hyperboloid and Klein coordinates, used internally for angles and convex
//! clipping. Public geometry is expressed in the half-plane model only.

use super::point::HPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Hv(pub [f64; 3]);

impl Hv {
    pub fn from_uhp(p: &HPoint) -> Hv {
        let (x, y) = (p.x(), p.y());
        let s = x * x + y * y;
        Hv([(1.0 + s) / (2.0 * y), (s - 1.0) / (2.0 * y), x / y])
    }

    pub fn to_uhp(&self) -> HPoint {
        let [x0, x1, x2] = self.0;
        let y = if x1 >= 0.0 { (x0 + x1) / (1.0 + x2 * x2) } else { 1.0 / (x0 - x1) };
        HPoint::from_parts(x2 * y, y, y.ln())
    }

    /// Minkowski product with signature (-, +, +).
    pub fn dot(&self, o: &Hv) -> f64 {
        -self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn klein(&self) -> [f64; 2] {
        [self.0[1] / self.0[0], self.0[2] / self.0[0]]
    }

    pub fn from_klein(k: [f64; 2]) -> Hv {
        let x0 = 1.0 / (1.0 - k[0] * k[0] - k[1] * k[1]).sqrt();
        Hv([x0, k[0] * x0, k[1] * x0])
    }

    /// Rescales a timelike vector onto the upper sheet.
    pub fn normalize(v: [f64; 3]) -> Hv {
        let n = (v[0] * v[0] - v[1] * v[1] - v[2] * v[2]).sqrt();
        Hv([v[0] / n, v[1] / n, v[2] / n])
    }

    /// Angle at `self` between the geodesics towards `u` and `w`.
    pub fn angle(&self, u: &Hv, w: &Hv) -> f64 {
        let tu = self.tangent_towards(u);
        let tw = self.tangent_towards(w);
        let nu = tu.dot(&tu).sqrt();
        let nw = tw.dot(&tw).sqrt();
        (tu.dot(&tw) / (nu * nw)).clamp(-1.0, 1.0).acos()
    }

    fn tangent_towards(&self, u: &Hv) -> Hv {
        let k = u.dot(self);
        Hv([u.0[0] + k * self.0[0], u.0[1] + k * self.0[1], u.0[2] + k * self.0[2]])
    }
}
