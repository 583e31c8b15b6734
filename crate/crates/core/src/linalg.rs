//! Small dense square matrices over `f64`, row-major.
//!
//! Dimensions here are tiny (`n + 1 <= 8` in practice), so everything is
//! plain loops.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

// Inherent float methods shadow these when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Builds a matrix from row slices; every row must have `rows.len()` entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap_or(k);
            if a[p * n + k] == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
                .unwrap_or(k);
            if a[(p, k)].abs() < 1e-300 {
                return Err(Error::InvalidArgument("singular matrix"));
            }
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
                inv.data.swap(k * n + j, p * n + j);
            }
            let pivot = a[(k, k)];
            for j in 0..n {
                a[(k, j)] /= pivot;
                inv[(k, j)] /= pivot;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(i, j)] -= f * a[(k, j)];
                    inv[(i, j)] -= f * inv[(k, j)];
                }
            }
        }
        Ok(inv)
    }

    /// Embeds `self` as the upper-left block of a `dim × dim` identity.
    pub fn embed(&self, dim: usize) -> Matrix {
        let mut m = Matrix::identity(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(i, j)];
            }
        }
        m
    }

    /// Upper-left `k × k` block.
    pub fn block(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)];
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        let n = self.dim;
        debug_assert_eq!(n, rhs.dim);
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Completes the unit vector `first` to a positively oriented orthonormal
/// basis of `R^k`, returned as the columns of a rotation matrix.
///
/// The completion is Gram–Schmidt against `e_1, …, e_k` in order, so it is a
/// fixed section of `SO(k) → S^{k-1}`.
pub fn rotation_with_first_column(first: &[f64]) -> Matrix {
    let k = first.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    basis.push(first.to_vec());
    for e in 0..k {
        if basis.len() == k {
            break;
        }
        let mut v = vec![0.0; k];
        v[e] = 1.0;
        for b in &basis {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let len = norm(&v);
        if len < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= len);
        basis.push(v);
    }
    let mut m = Matrix::zeros(k);
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, b);
    }
    if k > 1 && m.det() < 0.0 {
        for i in 0..k {
            m[(i, k - 1)] = -m[(i, k - 1)];
        }
    }
    m
}

/// Orthonormalizes the columns of a near-orthogonal matrix (modified
/// Gram–Schmidt, left to right), keeping the orientation.
pub fn orthonormalize(m: &Matrix) -> Matrix {
    let k = m.dim();
    let mut out = Matrix::zeros(k);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = m.column(j);
        for b in &cols {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let len = norm(&v);
        v.iter_mut().for_each(|x| *x /= len);
        out.set_column(j, &v);
        cols.push(v);
    }
    out
}
