//! The identity component `G = SO(n,1)°` of the standard form
//! `Q₀ = x_1² + … + x_n² − x_{n+1}²`, acting on column vectors.
//!
//! Subgroups, in coordinates:
//! - `K = SO(n)`, block-diagonal with 1 in the last slot (stabilizer of `o = e_{n+1}`);
//! - `A = {a_r}`, the boost in the `(1, n+1)` plane;
//! - `M = SO(n−1)` acting on `e_2, …, e_n`, the centralizer of `A` in `K`;
//! - `N = {n_v : v ∈ R^{n−1}}`, the unipotent subgroup with `a_r n a_{−r} → e`
//!   as `r → ∞`; it fixes the null vector `X₀⁻ = −e_1 + e_{n+1}`.
//!
//! Every element decomposes as `k₁ a_r k₂` with `r ≥ 0` (Cartan) and as
//! `n a_r k` (Iwasawa).

use alloc::vec;
use alloc::vec::Vec;

// Inherent float methods shadow these when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::form::QuadraticForm;
use crate::hyperbolic::{HyperboloidPoint, UnitTangent};
use crate::linalg::{norm, orthonormalize, rotation_with_first_column, Matrix};

/// Tolerance for form preservation and determinant checks.
pub const GROUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    mat: Matrix,
}

impl GroupElement {
    /// Validates membership in `SO(n,1)°`: form-preserving, `det = 1`, and
    /// mapping the positive sheet to itself.
    pub fn new(mat: Matrix) -> Result<Self> {
        let dim = mat.dim();
        if dim < 2 {
            return Err(Error::DimensionTooSmall { needed: 1, got: 0 });
        }
        let defect = lorentz_defect(&mat);
        if defect > GROUP_TOL {
            return Err(Error::NotFormPreserving(defect));
        }
        let det = mat.det();
        if (det - 1.0).abs() > GROUP_TOL {
            return Err(Error::BadDeterminant(det));
        }
        if mat[(dim - 1, dim - 1)] <= 0.0 {
            return Err(Error::SwapsSheets);
        }
        Ok(GroupElement { mat })
    }

    #[cfg(test)]
    pub(crate) fn from_matrix_unchecked(mat: Matrix) -> Self {
        GroupElement { mat }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            mat: Matrix::identity(n + 1),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// `n` for `SO(n,1)`.
    pub fn n(&self) -> usize {
        self.mat.dim() - 1
    }

    /// The form this element preserves.
    pub fn form(&self) -> QuadraticForm {
        QuadraticForm::lorentz(self.n()).expect("n >= 1")
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            mat: &self.mat * &other.mat,
        }
    }

    /// `g⁻¹ = J gᵀ J` with `J = diag(1, …, 1, −1)`.
    pub fn inverse(&self) -> GroupElement {
        let d = self.mat.dim();
        let mut inv = self.mat.transpose();
        for i in 0..d {
            for j in 0..d {
                if (i == d - 1) != (j == d - 1) {
                    inv[(i, j)] = -inv[(i, j)];
                }
            }
        }
        GroupElement { mat: inv }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.mat.mul_vec(x)
    }

    pub fn act(&self, x: &HyperboloidPoint) -> HyperboloidPoint {
        self.form().point_unchecked(self.apply(x.coords()))
    }

    /// `g · o`, the last column.
    pub fn orbit_point(&self) -> Vec<f64> {
        self.mat.column(self.mat.dim() - 1)
    }

    /// `‖gᵀ J g − J‖_max`.
    pub fn form_defect(&self) -> f64 {
        lorentz_defect(&self.mat)
    }

    pub fn max_abs_diff(&self, other: &GroupElement) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }

    /// Lorentzian Gram–Schmidt on the columns: the timelike last column first,
    /// then the spacelike ones in order. Restores form preservation after
    /// long products.
    pub fn reorthonormalize(&self) -> GroupElement {
        let d = self.mat.dim();
        let q = |x: &[f64], y: &[f64]| -> f64 {
            let mut s = 0.0;
            for k in 0..d - 1 {
                s += x[k] * y[k];
            }
            s - x[d - 1] * y[d - 1]
        };
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); d];
        let mut t = self.mat.column(d - 1);
        let tn = (-q(&t, &t)).sqrt();
        t.iter_mut().for_each(|v| *v /= tn);
        cols[d - 1] = t;
        let mut done = vec![d - 1];
        for j in 0..d - 1 {
            let mut c = self.mat.column(j);
            for &k in &done {
                let b = &cols[k];
                let coef = q(&c, b) / q(b, b);
                for (ci, bi) in c.iter_mut().zip(b) {
                    *ci -= coef * bi;
                }
            }
            let cn = q(&c, &c).sqrt();
            c.iter_mut().for_each(|v| *v /= cn);
            cols[j] = c;
            done.push(j);
        }
        let mut mat = Matrix::zeros(d);
        for (j, c) in cols.iter().enumerate() {
            mat.set_column(j, c);
        }
        GroupElement { mat }
    }

    /// Whether this element lies in `K` (fixes `o`).
    pub fn in_k(&self, tol: f64) -> bool {
        let d = self.mat.dim();
        (0..d).all(|i| {
            let e = if i == d - 1 { 1.0 } else { 0.0 };
            (self.mat[(i, d - 1)] - e).abs() < tol && (self.mat[(d - 1, i)] - e).abs() < tol
        })
    }

    /// Whether this element lies in `M`: in `K` and fixing `e_1`.
    pub fn in_m(&self, tol: f64) -> bool {
        let d = self.mat.dim();
        self.in_k(tol)
            && (0..d).all(|i| {
                let e = if i == 0 { 1.0 } else { 0.0 };
                (self.mat[(i, 0)] - e).abs() < tol && (self.mat[(0, i)] - e).abs() < tol
            })
    }
}

fn lorentz_defect(g: &Matrix) -> f64 {
    let d = g.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for k in 0..d {
                let sign = if k == d - 1 { -1.0 } else { 1.0 };
                s += sign * g[(k, i)] * g[(k, j)];
            }
            let target = if i != j {
                0.0
            } else if i == d - 1 {
                -1.0
            } else {
                1.0
            };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

/// `a_r`: `cosh r` / `sinh r` in coordinates `1` and `n+1`, identity between.
pub fn a_flow(n: usize, r: f64) -> GroupElement {
    let mut m = Matrix::identity(n + 1);
    let (c, s) = (r.cosh(), r.sinh());
    m[(0, 0)] = c;
    m[(0, n)] = s;
    m[(n, 0)] = s;
    m[(n, n)] = c;
    GroupElement { mat: m }
}

/// `ω₀ = diag(−1, −1, 1, …, 1) ∈ K`, with `ω₀ a_r ω₀⁻¹ = a_{−r}`.
pub fn omega0(n: usize) -> Result<GroupElement> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { needed: 2, got: n });
    }
    let mut diag = vec![1.0; n + 1];
    diag[0] = -1.0;
    diag[1] = -1.0;
    Ok(GroupElement {
        mat: Matrix::diagonal(&diag),
    })
}

/// The element of `K` acting on `R^n` by the rotation `k ∈ SO(n)`.
pub fn rotation(k: &Matrix) -> Result<GroupElement> {
    GroupElement::new(k.embed(k.dim() + 1))
}

/// `n_v ∈ N` for `v ∈ R^{n−1}`.
///
/// In the null frame `ξ± = ±e_1 + e_{n+1}` it acts by `ξ⁻ ↦ ξ⁻`,
/// `e_j ↦ e_j + v_j ξ⁻`, `ξ⁺ ↦ ξ⁺ + 2 v·e + |v|² ξ⁻`, so `n_v n_w = n_{v+w}`.
pub fn horospherical(v: &[f64]) -> GroupElement {
    let n = v.len() + 1;
    let d = n + 1;
    let s: f64 = v.iter().map(|x| x * x).sum::<f64>() / 2.0;
    let mut m = Matrix::identity(d);
    m[(0, 0)] = 1.0 - s;
    m[(n, 0)] = s;
    m[(0, n)] = -s;
    m[(n, n)] = 1.0 + s;
    for (j, vj) in v.iter().enumerate() {
        let row = j + 1;
        m[(row, 0)] = *vj;
        m[(row, n)] = *vj;
        m[(0, row)] = -vj;
        m[(n, row)] = *vj;
    }
    GroupElement { mat: m }
}

/// `g = k1 · a_r · k2` with `r ≥ 0`, `k1, k2 ∈ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanTriple {
    pub k1: GroupElement,
    pub r: f64,
    pub k2: GroupElement,
}

impl CartanTriple {
    pub fn reconstruct(&self) -> GroupElement {
        let n = self.k1.n();
        self.k1.compose(&a_flow(n, self.r)).compose(&self.k2)
    }
}

/// `g = nu · a_r · k` with `nu ∈ N`, `k ∈ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaTriple {
    pub nu: GroupElement,
    pub r: f64,
    pub k: GroupElement,
}

impl IwasawaTriple {
    pub fn reconstruct(&self) -> GroupElement {
        let n = self.nu.n();
        self.nu.compose(&a_flow(n, self.r)).compose(&self.k)
    }

    /// The `R^{n−1}` coordinate of `nu`.
    pub fn nu_coords(&self) -> Vec<f64> {
        let n = self.nu.n();
        (1..n).map(|j| self.nu.matrix()[(j, 0)]).collect()
    }
}

fn require_preserving(g: &GroupElement) -> Result<()> {
    let defect = g.form_defect();
    if defect > GROUP_TOL {
        return Err(Error::NotFormPreserving(defect));
    }
    Ok(())
}

/// Cartan decomposition `G = K A⁺ K`.
///
/// `g · o = (sinh r · u, cosh r)` gives `r` and the polar direction `u`;
/// `k1` is the fixed section [`rotation_with_first_column`] of `u`, which
/// pins the `M`-ambiguity, and `k2 = a_{−r} k1⁻¹ g`.
pub fn cartan_decompose(g: &GroupElement) -> Result<CartanTriple> {
    require_preserving(g)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::DimensionTooSmall { needed: 2, got: n });
    }
    let x = g.orbit_point();
    let spatial = &x[..n];
    let rho = norm(spatial);
    let r = rho.asinh();
    let k1 = if rho < 1e-12 {
        GroupElement::identity(n)
    } else {
        let u: Vec<f64> = spatial.iter().map(|v| v / rho).collect();
        GroupElement {
            mat: rotation_with_first_column(&u).embed(n + 1),
        }
    };
    let k2_raw = a_flow(n, -r).compose(&k1.inverse()).compose(g);
    let k2 = project_to_k(&k2_raw);
    Ok(CartanTriple { k1, r, k2 })
}

/// Iwasawa decomposition `G = N A K`.
///
/// With `x = g · o`, the horospherical height against `X₀⁻` gives
/// `e^r = x_1 + x_{n+1}`, the `N` coordinate is `v = e^{−r} (x_2, …, x_n)`,
/// and `k = a_{−r} n_{−v} g`.
pub fn iwasawa_decompose(g: &GroupElement) -> Result<IwasawaTriple> {
    require_preserving(g)?;
    let n = g.n();
    let x = g.orbit_point();
    let height = x[0] + x[n];
    if !(height > 0.0) {
        return Err(Error::SwapsSheets);
    }
    let r = height.ln();
    let v: Vec<f64> = x[1..n].iter().map(|c| c / height).collect();
    let nu = horospherical(&v);
    let minus: Vec<f64> = v.iter().map(|c| -c).collect();
    let k_raw = a_flow(n, -r).compose(&horospherical(&minus)).compose(g);
    let k = project_to_k(&k_raw);
    Ok(IwasawaTriple { nu, r, k })
}

/// Cleans rounding out of a matrix that is in `K` up to float error.
fn project_to_k(k: &GroupElement) -> GroupElement {
    let n = k.n();
    let block = orthonormalize(&k.mat.block(n));
    GroupElement {
        mat: block.embed(n + 1),
    }
}

/// The geodesic flow `g^r` on unit tangent vectors, for any form: moves the
/// base point distance `r` along the geodesic, fixing both endpoints.
pub fn geodesic_flow(form: &QuadraticForm, u: &UnitTangent, r: f64) -> UnitTangent {
    let (x, v) = form.flow_coords(u, r);
    form.tangent_unchecked(form.point_unchecked(x), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        let mut q = orthonormalize(&m);
        if q.det() < 0.0 {
            for i in 0..n {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
        rotation(&q).unwrap()
    }

    fn random_n(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
        let v: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        horospherical(&v)
    }

    #[test]
    fn a_flow_one_parameter_group() {
        let n = 3;
        assert!(a_flow(n, 0.0).max_abs_diff(&GroupElement::identity(n)) == 0.0);
        let prod = a_flow(n, 1.0).compose(&a_flow(n, 2.0));
        assert!(prod.max_abs_diff(&a_flow(n, 3.0)) < 1e-12);
        let w = omega0(n).unwrap();
        let conj = w.compose(&a_flow(n, 0.9)).compose(&w.inverse());
        assert!(conj.max_abs_diff(&a_flow(n, -0.9)) < 1e-15);
        assert!(GroupElement::new(a_flow(n, 2.5).matrix().clone()).is_ok());
    }

    #[test]
    fn omega0_normalizes_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 4;
        let w = omega0(n).unwrap();
        for _ in 0..20 {
            let m = {
                let inner = random_rotation(n - 1, &mut rng);
                // shift the SO(n−1) block onto e_2..e_n
                let mut mat = Matrix::identity(n + 1);
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        mat[(i + 1, j + 1)] = inner.matrix()[(i, j)];
                    }
                }
                GroupElement::new(mat).unwrap()
            };
            assert!(m.in_m(1e-12));
            let conj = w.compose(&m).compose(&w.inverse());
            assert!(conj.in_m(1e-10));
        }
        assert!(omega0(1).is_err());
    }

    #[test]
    fn horospherical_group_law() {
        let a = horospherical(&[0.3, -1.2]);
        let b = horospherical(&[0.5, 0.7]);
        assert!(a.compose(&b).max_abs_diff(&horospherical(&[0.8, -0.5])) < 1e-14);
        assert!(a.form_defect() < 1e-14);
        // contracted by conjugation with a_r as r → ∞, at rate e^{-r}
        let dev = |r: f64| {
            a_flow(3, r)
                .compose(&a)
                .compose(&a_flow(3, -r))
                .max_abs_diff(&GroupElement::identity(3))
        };
        let ratio = dev(8.0) / dev(4.0);
        assert!(ratio > 0.5 * (-4.0f64).exp() && ratio < 2.0 * (-4.0f64).exp());
        assert!(dev(12.0) < 1e-4);
    }

    #[test]
    fn validation_errors() {
        let mut m = Matrix::identity(3);
        m[(0, 1)] = 0.5;
        assert!(matches!(GroupElement::new(m), Err(Error::NotFormPreserving(_))));
        let refl = Matrix::diagonal(&[-1.0, 1.0, 1.0]);
        assert!(matches!(GroupElement::new(refl), Err(Error::BadDeterminant(_))));
        let flip = Matrix::diagonal(&[-1.0, 1.0, -1.0]);
        assert_eq!(GroupElement::new(flip), Err(Error::SwapsSheets));
        let bad = GroupElement::from_matrix_unchecked(Matrix::diagonal(&[2.0, 1.0, 1.0]));
        assert!(cartan_decompose(&bad).is_err());
        assert!(iwasawa_decompose(&bad).is_err());
    }

    #[test]
    fn cartan_examples() {
        let n = 3;
        let id = cartan_decompose(&GroupElement::identity(n)).unwrap();
        assert_eq!(id.r, 0.0);
        assert!(id.k1.compose(&id.k2).max_abs_diff(&GroupElement::identity(n)) < 1e-15);

        let c = cartan_decompose(&a_flow(n, 2.0)).unwrap();
        assert!((c.r - 2.0).abs() < 1e-12);
        assert!(c.k1.compose(&c.k2).in_m(1e-12));
        assert!(c.k1.in_m(1e-12));
    }

    #[test]
    fn cartan_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 3, 5] {
            for _ in 0..100 {
                let r = rng.gen_range(0.0..6.0);
                let g = random_rotation(n, &mut rng)
                    .compose(&a_flow(n, r))
                    .compose(&random_rotation(n, &mut rng));
                let c = cartan_decompose(&g).unwrap();
                assert!((c.r - r).abs() < 1e-9, "{} vs {r}", c.r);
                assert!(c.reconstruct().max_abs_diff(&g) < 1e-8 * g.matrix()[(n, n)]);
                assert!(c.k1.in_k(1e-12) && c.k2.in_k(1e-12));
                let o = QuadraticForm::lorentz(n).unwrap();
                let d = o.distance(&o.base_point(), &g.act(&o.base_point())).unwrap();
                assert!((c.r - d).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn iwasawa_examples() {
        let n = 3;
        let id = iwasawa_decompose(&GroupElement::identity(n)).unwrap();
        assert_eq!(id.r, 0.0);
        assert!(id.nu.max_abs_diff(&GroupElement::identity(n)) < 1e-15);
        assert!(id.k.max_abs_diff(&GroupElement::identity(n)) < 1e-15);
        let a = iwasawa_decompose(&a_flow(n, 1.3)).unwrap();
        assert!((a.r - 1.3).abs() < 1e-12);
        assert!(a.nu.max_abs_diff(&GroupElement::identity(n)) < 1e-12);
        assert!(a.k.max_abs_diff(&GroupElement::identity(n)) < 1e-12);
    }

    #[test]
    fn iwasawa_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [1usize, 2, 3, 4] {
            for _ in 0..100 {
                let r = rng.gen_range(-4.0..4.0);
                let nu = if n > 1 {
                    random_n(n, &mut rng)
                } else {
                    GroupElement::identity(n)
                };
                let k = if n > 1 {
                    random_rotation(n, &mut rng)
                } else {
                    GroupElement::identity(n)
                };
                let g = nu.compose(&a_flow(n, r)).compose(&k);
                let t = iwasawa_decompose(&g).unwrap();
                assert!((t.r - r).abs() < 1e-9);
                assert!(t.nu.max_abs_diff(&nu) < 1e-8);
                assert!(t.k.max_abs_diff(&k) < 1e-8);
                assert!(t.reconstruct().max_abs_diff(&g) < 1e-8 * g.matrix()[(n, n)].max(1.0));
            }
        }
    }

    #[test]
    fn long_chains_stay_form_preserving() {
        // random rotations interleaved with a_{±0.3}, the sign picked to keep
        // cosh d(o, g o) small so entries stay O(1)
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 3;
        let rotations: Vec<GroupElement> = (0..8).map(|_| random_rotation(n, &mut rng)).collect();
        let (fwd, back) = (a_flow(n, 0.3), a_flow(n, -0.3));
        let mut g = GroupElement::identity(n);
        for k in 1..=10_000usize {
            let turned = g.compose(&rotations[rng.gen_range(0..rotations.len())]);
            let a = turned.compose(&fwd);
            let b = turned.compose(&back);
            g = if a.matrix()[(n, n)] < b.matrix()[(n, n)] || rng.gen_bool(0.3) {
                a
            } else {
                b
            };
            if k % 100 == 0 {
                g = g.reorthonormalize();
            }
            assert!(g.form_defect() < (k as f64) * 1e-10, "step {k}: {}", g.form_defect());
        }
    }

    #[test]
    fn geodesic_flow_examples() {
        let q = QuadraticForm::lorentz(2).unwrap();
        let u = q.tangent(q.base_point(), alloc::vec![0.6, 0.8, 0.0]).unwrap();
        let same = geodesic_flow(&q, &u, 0.0);
        assert_eq!(same, u);
        let moved = geodesic_flow(&q, &u, 2.2);
        assert!((q.distance(u.base(), moved.base()).unwrap() - 2.2).abs() < 1e-12);
        let far = geodesic_flow(&q, &u, 5.0);
        let plus = q.forward_endpoint(&u).unwrap();
        let plus_far = q.forward_endpoint(&far).unwrap();
        let diff = plus
            .coords()
            .iter()
            .zip(plus_far.coords())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-9);
        let twice = geodesic_flow(&q, &geodesic_flow(&q, &u, 1.1), 0.7);
        let once = geodesic_flow(&q, &u, 1.8);
        assert!(q.distance(twice.base(), once.base()).unwrap() < 1e-9);
        // still a unit tangent after flowing
        assert!(q.tangent(far.base().clone(), far.dir().to_vec()).is_ok());
    }
}
