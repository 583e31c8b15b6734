//! Quadratic defect of the horospherical chart `q_v` on the normal bundle of
//! a totally geodesic line and of a sphere, in the hyperboloid model of `ℍ²`.
//!
//! For `w` near `v` in the normal bundle `Ẽ`, `q_v(w)` is the vector of the
//! unstable horosphere `ℋ_v⁺` (based at `v⁻`, through `π(v)`) with the same
//! forward endpoint as `w`. The defect is the Busemann offset
//! `ℓ_v(w) = β_{w⁺}(π(q_v(w)), π(w))`: how far `w` sits ahead of `q_v(w)`
//! along their common geodesic.
//!
//! With `w = v·h(t)` (translation by `2t` along the line) the defect is
//! `2 log cosh t`; with `w = v·k(t)` (rotation by `2t` about the sphere's
//! center) it is `2 log cos t`. Neither closed form is used below.

use alloc::vec;

use core::f64::consts::FRAC_PI_2;

// Inherent float methods shadow these when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::form::QuadraticForm;
use crate::hyperbolic::UnitTangent;

/// Radius of the sphere used for the sphere case. The defect does not depend
/// on it: flowing both `w` and `q_v(w)` back by the radius preserves their
/// Busemann offset.
pub const SPHERE_RADIUS: f64 = 1.0;

/// Busemann offset between `w` and its horospherical projection `q_v(w)`.
pub fn horospherical_offset(form: &QuadraticForm, v: &UnitTangent, w: &UnitTangent) -> Result<f64> {
    let v_minus = form.backward_endpoint(v)?;
    let w_plus = form.forward_endpoint(w)?;
    let q = form.horosphere_meets_geodesic(&v_minus, v.base(), &w_plus)?;
    form.busemann(&w_plus, &q, w.base())
}

/// Normal vectors to the geodesic `{(0, sinh s, cosh s)}` at parameter `s`.
fn geodesic_normal(form: &QuadraticForm, s: f64) -> Result<UnitTangent> {
    let base = form.point(vec![0.0, s.sinh(), s.cosh()])?;
    form.tangent(base, vec![1.0, 0.0, 0.0])
}

/// Outward normal to the sphere of radius `rho` about `o`, at angle `theta`.
fn sphere_normal(form: &QuadraticForm, rho: f64, theta: f64) -> Result<UnitTangent> {
    let (c, s) = (theta.cos(), theta.sin());
    let base = form.point(vec![rho.sinh() * c, rho.sinh() * s, rho.cosh()])?;
    form.tangent(base, vec![rho.cosh() * c, rho.cosh() * s, rho.sinh()])
}

/// The defect in the totally geodesic case.
pub fn geodesic_defect(t: f64) -> Result<f64> {
    let form = QuadraticForm::lorentz(2)?;
    let v = geodesic_normal(&form, 0.0)?;
    let w = geodesic_normal(&form, 2.0 * t)?;
    horospherical_offset(&form, &v, &w)
}

/// The defect in the sphere case, for a sphere of radius `rho`.
pub fn sphere_defect(t: f64, rho: f64) -> Result<f64> {
    if !(t.abs() < FRAC_PI_2) {
        return Err(Error::ChartDomain(t.abs()));
    }
    let form = QuadraticForm::lorentz(2)?;
    let v = sphere_normal(&form, rho, 0.0)?;
    let w = sphere_normal(&form, rho, 2.0 * t)?;
    horospherical_offset(&form, &v, &w)
}

/// `(ℓ_geodesic(t), ℓ_sphere(t))`, defined for `|t| < π/2`.
pub fn chart_defect(t: f64) -> Result<(f64, f64)> {
    if !(t.abs() < FRAC_PI_2) {
        return Err(Error::ChartDomain(t.abs()));
    }
    Ok((geodesic_defect(t)?, sphere_defect(t, SPHERE_RADIUS)?))
}
