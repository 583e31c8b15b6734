//! The hyperboloid model `{x : Q(x) = −1}` (one sheet) for a form of
//! signature `(n, 1)`, with distances, Busemann functions and horospheres.
//!
//! Cosh of the distance is `−Q(x, y)`. For a null vector `ξ` on the forward
//! cone the Busemann function has the closed form
//! `β_ξ(x, y) = log(Q(x, ξ) / Q(y, ξ))`, independent of the scaling of `ξ`.

use alloc::vec::Vec;

// Inherent float methods shadow these when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::form::QuadraticForm;
use crate::linalg::norm;

/// Absolute tolerance for geometric predicates, scaled by `max(1, ‖x‖²)` where
/// a predicate involves a point far out on the hyperboloid.
pub const GEOM_TOL: f64 = 1e-9;

fn scaled_tol(x: &[f64]) -> f64 {
    let n2: f64 = x.iter().map(|v| v * v).sum();
    GEOM_TOL * n2.max(1.0)
}

/// A point of `{Q = −1}` on the sheet of the form's reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidPoint {
    coords: Vec<f64>,
}

impl HyperboloidPoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// A point of the boundary sphere: a null line `ℝv`, stored with Euclidean
/// norm 1 and first nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRay {
    coords: Vec<f64>,
}

impl BoundaryRay {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A unit tangent vector `dir` at `base`: `Q(dir) = 1`, `Q(base, dir) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitTangent {
    base: HyperboloidPoint,
    dir: Vec<f64>,
}

impl UnitTangent {
    pub fn base(&self) -> &HyperboloidPoint {
        &self.base
    }

    pub fn dir(&self) -> &[f64] {
        &self.dir
    }
}

impl QuadraticForm {
    /// The reference point `o` fixing the sheet.
    pub fn base_point(&self) -> HyperboloidPoint {
        HyperboloidPoint {
            coords: self.base_coords().to_vec(),
        }
    }

    /// Validates `coords` as a point of the reference sheet.
    pub fn point(&self, coords: Vec<f64>) -> Result<HyperboloidPoint> {
        let q = self.eval(&coords)?;
        if (q + 1.0).abs() > scaled_tol(&coords) {
            return Err(Error::OffHyperboloid(q));
        }
        if self.bilinear_unchecked(&coords, self.base_coords()) >= 0.0 {
            return Err(Error::WrongSheet);
        }
        Ok(HyperboloidPoint { coords })
    }

    /// Rescales a timelike vector onto `{Q = −1}`, choosing the reference sheet.
    pub fn project(&self, mut coords: Vec<f64>) -> Result<HyperboloidPoint> {
        let q = self.eval(&coords)?;
        if !(q < 0.0) {
            return Err(Error::OffHyperboloid(q));
        }
        let mut s = 1.0 / (-q).sqrt();
        if self.bilinear_unchecked(&coords, self.base_coords()) > 0.0 {
            s = -s;
        }
        coords.iter_mut().for_each(|x| *x *= s);
        Ok(HyperboloidPoint { coords })
    }

    /// Validates a null vector and stores its canonical representative.
    pub fn ray(&self, coords: Vec<f64>) -> Result<BoundaryRay> {
        self.eval(&coords)?;
        let len = norm(&coords);
        if len == 0.0 {
            return Err(Error::ZeroVector);
        }
        let sign = coords
            .iter()
            .find(|v| v.abs() > 1e-15 * len)
            .map_or(1.0, |v| v.signum());
        let coords: Vec<f64> = coords.iter().map(|v| v * sign / len).collect();
        let q = self.bilinear_unchecked(&coords, &coords);
        if q.abs() > GEOM_TOL {
            return Err(Error::NotNull(q));
        }
        Ok(BoundaryRay { coords })
    }

    /// Validates a unit tangent vector.
    pub fn tangent(&self, base: HyperboloidPoint, dir: Vec<f64>) -> Result<UnitTangent> {
        let norm2 = self.eval(&dir)?;
        let inner = self.bilinear_unchecked(&base.coords, &dir);
        let tol = scaled_tol(&base.coords);
        if (norm2 - 1.0).abs() > tol || inner.abs() > tol {
            return Err(Error::NotUnitTangent { norm: norm2, inner });
        }
        Ok(UnitTangent { base, dir })
    }

    /// Hyperbolic distance, `arccosh(−Q(x, y))`.
    ///
    /// Near the diagonal this is evaluated as `2 asinh(√Q(x − y) / 2)`, which
    /// is the same quantity without the cancellation in `arccosh` at 1.
    pub fn distance(&self, x: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<f64> {
        let c = -self.bilinear(&x.coords, &y.coords)?;
        let tol = scaled_tol(&x.coords).max(scaled_tol(&y.coords));
        if c < 1.0 - tol {
            return Err(Error::NotSameSheet(c));
        }
        if c < 2.0 {
            let diff: Vec<f64> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
            let q = self.bilinear_unchecked(&diff, &diff).max(0.0);
            Ok(2.0 * (q.sqrt() / 2.0).asinh())
        } else {
            Ok(c.acosh())
        }
    }

    /// The representative of `xi` on the forward cone (the cone containing the sheet).
    fn forward(&self, xi: &BoundaryRay) -> Vec<f64> {
        if self.bilinear_unchecked(&xi.coords, self.base_coords()) > 0.0 {
            xi.coords.iter().map(|v| -v).collect()
        } else {
            xi.coords.clone()
        }
    }

    /// Busemann function `β_ξ(x, y) = log(−Q(x, ξ) / −Q(y, ξ))`.
    ///
    /// Positive when `y` is closer to `ξ` than `x`.
    pub fn busemann(&self, xi: &BoundaryRay, x: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<f64> {
        let f = self.forward(xi);
        let qx = self.bilinear(&x.coords, &f)?;
        let qy = self.bilinear(&y.coords, &f)?;
        if qx >= 0.0 {
            return Err(Error::RayNotForward(qx));
        }
        if qy >= 0.0 {
            return Err(Error::RayNotForward(qy));
        }
        Ok((qx / qy).ln())
    }

    /// `β_ξ(reference, x)`: zero exactly on the horosphere based at `ξ`
    /// through `reference`.
    pub fn horosphere_defect(
        &self,
        xi: &BoundaryRay,
        x: &HyperboloidPoint,
        reference: &HyperboloidPoint,
    ) -> Result<f64> {
        self.busemann(xi, reference, x)
    }

    pub fn on_horosphere(&self, xi: &BoundaryRay, x: &HyperboloidPoint, reference: &HyperboloidPoint) -> Result<bool> {
        Ok(self.horosphere_defect(xi, x, reference)?.abs() < GEOM_TOL)
    }

    /// Membership in the totally geodesic hyperplane `{x : Q(x, m) = 0}`
    /// with spacelike normal `m`.
    pub fn on_geodesic_hyperplane(&self, normal: &[f64], x: &HyperboloidPoint) -> Result<bool> {
        let qm = self.eval(normal)?;
        if !(qm > 0.0) {
            return Err(Error::InvalidArgument("hyperplane normal must be spacelike"));
        }
        let inner = self.bilinear(normal, &x.coords)? / qm.sqrt();
        Ok(inner.abs() < scaled_tol(&x.coords))
    }

    /// The forward endpoint `u⁺ = ℝ(x + v)` of the geodesic through `u`.
    pub fn forward_endpoint(&self, u: &UnitTangent) -> Result<BoundaryRay> {
        self.ray(u.base.coords.iter().zip(&u.dir).map(|(x, v)| x + v).collect())
    }

    /// The backward endpoint `u⁻ = ℝ(x − v)`.
    pub fn backward_endpoint(&self, u: &UnitTangent) -> Result<BoundaryRay> {
        self.ray(u.base.coords.iter().zip(&u.dir).map(|(x, v)| x - v).collect())
    }

    /// The point where the geodesic from `center` to `other` meets the
    /// horosphere based at `center` through `through`.
    pub fn horosphere_meets_geodesic(
        &self,
        center: &BoundaryRay,
        through: &HyperboloidPoint,
        other: &BoundaryRay,
    ) -> Result<HyperboloidPoint> {
        let p = self.forward(center);
        let q = self.forward(other);
        let c = self.bilinear(&p, &q)?;
        if !(c < 0.0) {
            return Err(Error::InvalidArgument("geodesic endpoints coincide"));
        }
        // x = αp + βq with Q(x) = 2αβc = −1 and Q(x, p) = βc = Q(through, p).
        let beta = self.bilinear(&through.coords, &p)? / c;
        let alpha = -1.0 / (2.0 * beta * c);
        let coords = p.iter().zip(&q).map(|(a, b)| alpha * a + beta * b).collect();
        self.project(coords)
    }

    /// The point at signed distance `r` along `u`, and the transported direction.
    pub(crate) fn flow_coords(&self, u: &UnitTangent, r: f64) -> (Vec<f64>, Vec<f64>) {
        let (c, s) = (r.cosh(), r.sinh());
        let x = u.base.coords.iter().zip(&u.dir).map(|(x, v)| c * x + s * v).collect();
        let v = u.base.coords.iter().zip(&u.dir).map(|(x, v)| s * x + c * v).collect();
        (x, v)
    }

    pub(crate) fn point_unchecked(&self, coords: Vec<f64>) -> HyperboloidPoint {
        HyperboloidPoint { coords }
    }

    pub(crate) fn tangent_unchecked(&self, base: HyperboloidPoint, dir: Vec<f64>) -> UnitTangent {
        UnitTangent { base, dir }
    }
}
