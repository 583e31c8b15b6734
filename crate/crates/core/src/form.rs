//! Quadratic forms of signature `(n, 1)` with exact rational Gram matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
// Inherent float methods shadow `Float` when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Which closed-form family a form came from, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `x_1² + … + x_n² − x_{n+1}²`.
    Lorentz,
    /// `2(x_1² + … + x_4²) − (x_1 + … + x_4)²`.
    Descartes,
    Custom,
}

/// A real quadratic form `Q(x) = xᵀ G x` with symmetric rational Gram matrix.
///
/// The form also fixes a reference point `o` with `Q(o) = −1`; the sheet of
/// `{Q = −1}` containing `o` is the model of hyperbolic space used by
/// [`crate::hyperbolic`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    dim: usize,
    kind: FormKind,
    gram: Vec<BigRational>,
    gram_f64: Matrix,
    signature: (usize, usize),
    base: Vec<f64>,
}

impl QuadraticForm {
    /// The standard form `Q₀` of signature `(n, 1)` on `R^{n+1}`; base point `e_{n+1}`.
    pub fn lorentz(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { needed: 1, got: 0 });
        }
        let dim = n + 1;
        let mut gram = vec![BigRational::zero(); dim * dim];
        for i in 0..dim {
            gram[i * dim + i] = if i == n {
                -BigRational::one()
            } else {
                BigRational::one()
            };
        }
        let mut base = vec![0.0; dim];
        base[n] = 1.0;
        Ok(Self::assemble(dim, FormKind::Lorentz, gram, (n, 1), base))
    }

    /// The Descartes form on `R⁴`: Gram matrix with 1 on the diagonal and −1
    /// off it. Base point `(1,1,1,1)/√8`, since `Q(1,1,1,1) = −8`.
    pub fn descartes() -> Self {
        let dim = 4;
        let gram = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    BigRational::one()
                } else {
                    -BigRational::one()
                }
            })
            .collect();
        let s = 1.0 / 8.0f64.sqrt();
        Self::assemble(dim, FormKind::Descartes, gram, (3, 1), vec![s; 4])
    }

    /// A form from an arbitrary symmetric Gram matrix (row-major).
    ///
    /// The signature must be `(dim − 1, 1)`. The base point is read off the
    /// congruence diagonalization as the vector of the negative pivot.
    pub fn from_gram(dim: usize, gram: Vec<BigRational>) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: gram.len(),
            });
        }
        for i in 0..dim {
            for j in 0..i {
                if gram[i * dim + j] != gram[j * dim + i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let (pivots, rows) = congruence_diagonalize(dim, &gram);
        let pos = pivots.iter().filter(|p| p.is_positive()).count();
        let neg = pivots.iter().filter(|p| p.is_negative()).count();
        if neg != 1 || pos + 1 != dim {
            return Err(Error::BadSignature(pos, neg));
        }
        let k = pivots.iter().position(|p| p.is_negative()).unwrap_or(0);
        let scale = (-pivots[k].to_f64().unwrap_or(-1.0)).sqrt();
        let base: Vec<f64> = rows[k].iter().map(|x| x.to_f64().unwrap_or(0.0) / scale).collect();
        Ok(Self::assemble(dim, FormKind::Custom, gram, (pos, neg), base))
    }

    fn assemble(dim: usize, kind: FormKind, gram: Vec<BigRational>, signature: (usize, usize), base: Vec<f64>) -> Self {
        let mut gram_f64 = Matrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                gram_f64[(i, j)] = gram[i * dim + j].to_f64().unwrap_or(f64::NAN);
            }
        }
        QuadraticForm {
            dim,
            kind,
            gram,
            gram_f64,
            signature,
            base,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n` for a form of signature `(n, 1)`.
    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn gram(&self, i: usize, j: usize) -> &BigRational {
        &self.gram[i * self.dim + j]
    }

    pub fn gram_f64(&self) -> &Matrix {
        &self.gram_f64
    }

    /// Gram entries as integers, when they all are.
    pub fn gram_integer(&self) -> Option<Vec<BigInt>> {
        self.gram
            .iter()
            .map(|g| g.is_integer().then(|| g.to_integer()))
            .collect()
    }

    pub(crate) fn base_coords(&self) -> &[f64] {
        &self.base
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// `Q(x)` in floating point.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.bilinear(x, x)
    }

    /// `Q(x, y) = xᵀ G y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        Ok(self.bilinear_unchecked(x, y))
    }

    pub(crate) fn bilinear_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let g = &self.gram_f64;
        let mut acc = 0.0;
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            let row = g.row(i);
            let mut s = 0.0;
            for j in 0..self.dim {
                s += row[j] * y[j];
            }
            acc += x[i] * s;
        }
        acc
    }

    /// Exact `Q(x)` for rational input.
    pub fn eval_exact(&self, x: &[BigRational]) -> Result<BigRational> {
        self.bilinear_exact(x, x)
    }

    /// Exact `Q(x, y)` for rational input.
    pub fn bilinear_exact(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut acc = BigRational::zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let g = &self.gram[i * self.dim + j];
                if g.is_zero() || y[j].is_zero() {
                    continue;
                }
                acc += &x[i] * g * &y[j];
            }
        }
        Ok(acc)
    }

    /// Exact `Q(x)` for integer input. The result is an integer whenever the
    /// Gram matrix is.
    pub fn eval_integer(&self, x: &[BigInt]) -> Result<BigRational> {
        self.bilinear_integer(x, x)
    }

    pub fn bilinear_integer(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigRational> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut acc = BigRational::zero();
        for i in 0..self.dim {
            let mut row = BigRational::zero();
            for j in 0..self.dim {
                let g = &self.gram[i * self.dim + j];
                if !g.is_zero() {
                    row += g * BigRational::from_integer(y[j].clone());
                }
            }
            acc += row * BigRational::from_integer(x[i].clone());
        }
        Ok(acc)
    }

    /// Whether `gᵀ G g = G` holds exactly for a rational matrix `g` (row-major).
    pub fn preserved_by_exact(&self, g: &[BigRational]) -> bool {
        let d = self.dim;
        if g.len() != d * d {
            return false;
        }
        // (gᵀ G g)_{ij} = Σ_{k,l} g_{ki} G_{kl} g_{lj}
        for i in 0..d {
            for j in i..d {
                let mut acc = BigRational::zero();
                for k in 0..d {
                    let gki = &g[k * d + i];
                    if gki.is_zero() {
                        continue;
                    }
                    for l in 0..d {
                        let gkl = &self.gram[k * d + l];
                        let glj = &g[l * d + j];
                        if gkl.is_zero() || glj.is_zero() {
                            continue;
                        }
                        acc += gki * gkl * glj;
                    }
                }
                if acc != self.gram[i * d + j] {
                    return false;
                }
            }
        }
        true
    }

    /// `‖gᵀ G g − G‖_max` for a float matrix.
    pub fn preservation_defect(&self, g: &Matrix) -> f64 {
        let lhs = &(&g.transpose() * &self.gram_f64) * g;
        lhs.max_abs_diff(&self.gram_f64)
    }
}

/// Congruence diagonalization `P G Pᵀ = D` over the rationals.
///
/// Returns the diagonal of `D` and the rows of `P`; row `k` of `P` is a vector
/// `x` with `Q(x) = D_kk`.
fn congruence_diagonalize(dim: usize, gram: &[BigRational]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let mut a: Vec<BigRational> = gram.to_vec();
    let mut p: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let at = |a: &Vec<BigRational>, i: usize, j: usize| a[i * dim + j].clone();

    for k in 0..dim {
        if at(&a, k, k).is_zero() {
            if let Some(i) = (k + 1..dim).find(|&i| !at(&a, i, i).is_zero()) {
                // symmetric swap of k and i
                for j in 0..dim {
                    a.swap(k * dim + j, i * dim + j);
                }
                for j in 0..dim {
                    a.swap(j * dim + k, j * dim + i);
                }
                p.swap(k, i);
            } else if let Some(i) = (k + 1..dim).find(|&i| !at(&a, k, i).is_zero()) {
                // row/col k += row/col i makes a_kk = 2 a_ki + a_ii = 2 a_ki ≠ 0
                for j in 0..dim {
                    let v = at(&a, i, j);
                    a[k * dim + j] += v;
                }
                for j in 0..dim {
                    let v = at(&a, j, i);
                    a[j * dim + k] += v;
                }
                let pi = p[i].clone();
                for (x, y) in p[k].iter_mut().zip(pi) {
                    *x += y;
                }
            } else {
                continue;
            }
        }
        let pivot = at(&a, k, k);
        for i in k + 1..dim {
            let f = at(&a, i, k) / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in 0..dim {
                let v = at(&a, k, j);
                a[i * dim + j] -= &f * v;
            }
            for j in 0..dim {
                let v = at(&a, j, k);
                a[j * dim + i] -= &f * v;
            }
            let pk = p[k].clone();
            for (x, y) in p[i].iter_mut().zip(pk) {
                *x -= &f * y;
            }
        }
    }
    let pivots = (0..dim).map(|k| at(&a, k, k)).collect();
    (pivots, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn descartes_values() {
        let q = QuadraticForm::descartes();
        assert_eq!(q.eval_integer(&ints(&[0, 0, 0, 2])).unwrap(), int(4));
        assert_eq!(q.eval_integer(&ints(&[-1, 2, 2, 3])).unwrap(), int(0));
        assert_eq!(q.eval_integer(&ints(&[1, 1, 1, 1])).unwrap(), int(-8));
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(q.bilinear(&e1, &e2).unwrap(), -1.0);
        assert_eq!(q.signature(), (3, 1));
    }

    #[test]
    fn lorentz_base_point() {
        let q = QuadraticForm::lorentz(3).unwrap();
        let o = [0.0, 0.0, 0.0, 1.0];
        assert_eq!(q.eval(&o).unwrap(), -1.0);
        assert_eq!(q.bilinear(&o, &o).unwrap(), -1.0);
    }

    #[test]
    fn dimension_mismatch() {
        let q = QuadraticForm::descartes();
        assert!(matches!(
            q.eval(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn signature_from_gram() {
        let d = QuadraticForm::descartes();
        let gram: Vec<BigRational> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| d.gram(i, j).clone())
            .collect();
        let custom = QuadraticForm::from_gram(4, gram).unwrap();
        assert_eq!(custom.signature(), (3, 1));
        let o = custom.base_coords().to_vec();
        assert!((custom.eval(&o).unwrap() + 1.0).abs() < 1e-12);

        // x y − z² has signature (1, 2) after diagonalization: rejected.
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let z = BigRational::zero();
        let g = vec![
            z.clone(),
            half.clone(),
            z.clone(),
            half,
            z.clone(),
            z.clone(),
            z.clone(),
            z,
            int(-1),
        ];
        assert_eq!(
            QuadraticForm::from_gram(3, g).unwrap_err().to_string(),
            "form has signature (1, 2), expected (n, 1)"
        );
    }

    #[test]
    fn asymmetric_gram_rejected() {
        let g = vec![int(1), int(2), int(0), int(-1)];
        assert_eq!(QuadraticForm::from_gram(2, g), Err(Error::NotSymmetric));
    }

    #[test]
    fn exact_at_large_magnitude() {
        // entries up to 10^50: no rounding anywhere
        let q = QuadraticForm::descartes();
        let big = BigInt::from(10).pow(50);
        let x = [big.clone(), big.clone() * 2, big.clone() * 2, big.clone() * 3];
        let x: Vec<BigInt> = x.iter().map(|v| v - BigInt::from(1)).collect();
        let direct = {
            let s: BigInt = x.iter().sum();
            let sq: BigInt = x.iter().map(|v| v * v).sum();
            BigInt::from(2) * sq - &s * &s
        };
        assert_eq!(q.eval_integer(&x).unwrap(), BigRational::from_integer(direct));
    }

    proptest! {
        #[test]
        fn bilinear_symmetric(x in prop::collection::vec(-1e3f64..1e3, 4), y in prop::collection::vec(-1e3f64..1e3, 4)) {
            let q = QuadraticForm::descartes();
            let (a, b) = (q.bilinear(&x, &y).unwrap(), q.bilinear(&y, &x).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn polarization_exact(x in prop::collection::vec(-10i64.pow(15)..10i64.pow(15), 4),
                              y in prop::collection::vec(-10i64.pow(15)..10i64.pow(15), 4)) {
            let q = QuadraticForm::descartes();
            let (xb, yb) = (ints(&x), ints(&y));
            let s: Vec<BigInt> = xb.iter().zip(&yb).map(|(a, b)| a + b).collect();
            let polar = (q.eval_integer(&s).unwrap() - q.eval_integer(&xb).unwrap() - q.eval_integer(&yb).unwrap())
                / int(2);
            prop_assert_eq!(polar, q.bilinear_integer(&xb, &yb).unwrap());
        }
    }
}
