//! Dense 3x3 linear algebra: determinant, solve, inverse, transpose products
//! and a one-sided Jacobi SVD backing the Moore-Penrose solver.
//!
//! The model's state dimension is fixed at three, so everything here is
//! written directly for the 3x3 case instead of a general kernel.

#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::cast;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Maximum Jacobi sweeps before the SVD reports a defect.
const MAX_JACOBI_SWEEPS: usize = 100;

/// Three-component real vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector3<T = f64>([T; 3]);

impl<T: Scalar> Vector3<T> {
    pub fn new(x0: T, x1: T, x2: T) -> Self {
        Vector3([x0, x1, x2])
    }

    pub fn zero() -> Self {
        Vector3([T::zero(); 3])
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Vector3(a)
    }

    pub fn as_array(&self) -> [T; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    /// Largest absolute component.
    pub fn max_norm(&self) -> T {
        self.0
            .iter()
            .fold(T::zero(), |acc, &x| if x.abs() > acc { x.abs() } else { acc })
    }

    pub fn scale(&self, s: T) -> Self {
        Vector3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl<T: Scalar> Index<usize> for Vector3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar> IndexMut<usize> for Vector3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Scalar> Add for Vector3<T> {
    type Output = Vector3<T>;
    fn add(self, rhs: Self) -> Self {
        Vector3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl<T: Scalar> Sub for Vector3<T> {
    type Output = Vector3<T>;
    fn sub(self, rhs: Self) -> Self {
        Vector3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl<T: Scalar> Neg for Vector3<T> {
    type Output = Vector3<T>;
    fn neg(self) -> Self {
        Vector3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// Row-major 3x3 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix3<T = f64> {
    rows: [[T; 3]; 3],
}

/// Singular value decomposition `u * diag(sigma) * vt` of a 3x3 matrix.
///
/// `u` and `vt` are orthogonal, `sigma` is sorted non-increasing.
#[derive(Clone, Copy, Debug)]
pub struct Svd3<T = f64> {
    pub u: Matrix3<T>,
    pub sigma: [T; 3],
    pub vt: Matrix3<T>,
}

impl<T: Scalar> Matrix3<T> {
    pub fn from_rows(rows: [[T; 3]; 3]) -> Self {
        Matrix3 { rows }
    }

    pub fn identity() -> Self {
        let o = T::one();
        let z = T::zero();
        Matrix3 { rows: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    pub fn zero() -> Self {
        Matrix3 { rows: [[T::zero(); 3]; 3] }
    }

    pub fn diagonal(d0: T, d1: T, d2: T) -> Self {
        let z = T::zero();
        Matrix3 { rows: [[d0, z, z], [z, d1, z], [z, z, d2]] }
    }

    pub fn row(&self, i: usize) -> [T; 3] {
        self.rows[i]
    }

    pub fn column(&self, j: usize) -> Vector3<T> {
        Vector3([self.rows[0][j], self.rows[1][j], self.rows[2][j]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.rows;
        Matrix3 {
            rows: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// Matrix-vector product, rows accumulated left to right.
    pub fn mul_vec(&self, v: &Vector3<T>) -> Vector3<T> {
        let m = &self.rows;
        Vector3([
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ])
    }

    /// Transpose product `self^T * self`.
    pub fn gram(&self) -> Self {
        self.transpose() * *self
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> T {
        self.rows
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &x| if x.abs() > acc { x.abs() } else { acc })
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> T {
        let m = &self.rows;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Scale-aware cutoff below which the matrix is treated as singular:
    /// `1e-12 * (1 + max_norm^3)`.
    pub fn singularity_threshold(&self) -> T {
        let n = self.max_norm();
        lit::<T>(1e-12) * (T::one() + n * n * n)
    }

    /// Solve `self * x = v` by Gaussian elimination with partial pivoting.
    ///
    /// Fails with [`Error::SingularMatrix`] when the determinant falls at or
    /// below [`Matrix3::singularity_threshold`].
    pub fn solve(&self, v: &Vector3<T>) -> Result<Vector3<T>> {
        self.check_regular()?;
        let mut a = self.rows;
        let mut b = v.as_array();
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&i, &j| {
                    a[i][col]
                        .abs()
                        .partial_cmp(&a[j][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in col + 1..3 {
                let factor = a[row][col] / a[col][col];
                for k in col..3 {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
        let mut x = [T::zero(); 3];
        for row in (0..3).rev() {
            let mut s = b[row];
            for k in row + 1..3 {
                s -= a[row][k] * x[k];
            }
            x[row] = s / a[row][row];
        }
        Ok(Vector3(x))
    }

    /// Inverse via the adjugate, guarded by the singularity threshold.
    pub fn inverse(&self) -> Result<Self> {
        self.check_regular()?;
        let det = self.det();
        let m = &self.rows;
        let c = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
        // adjugate: transposed cofactors
        let adj = [
            [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
            [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
            [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
        ];
        let mut rows = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rows[i][j] = adj[i][j] / det;
            }
        }
        Ok(Matrix3 { rows })
    }

    fn check_regular(&self) -> Result<()> {
        let det = self.det();
        let threshold = self.singularity_threshold();
        if det.abs() <= threshold {
            return Err(Error::SingularMatrix {
                det: cast::<T, f64>(det).unwrap_or(f64::NAN),
                threshold: cast::<T, f64>(threshold).unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Singular value decomposition by one-sided Jacobi rotations.
    ///
    /// Returns orthogonal `u`, singular values sorted non-increasing, and
    /// `vt`. Failure to converge within the sweep limit is a defect and
    /// panics.
    pub fn svd(&self) -> Svd3<T> {
        let mut work = *self; // columns evolve into U * diag(sigma)
        let mut v = Matrix3::identity();
        let eps = T::epsilon();
        let mut converged = false;
        for _ in 0..MAX_JACOBI_SWEEPS {
            let mut rotated = false;
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let cp = work.column(p);
                let cq = work.column(q);
                let alpha = cp.norm_sq();
                let beta = cq.norm_sq();
                let gamma = cp.dot(&cq);
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / ((T::one() + T::one()) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for row in 0..3 {
                    let wp = work.rows[row][p];
                    let wq = work.rows[row][q];
                    work.rows[row][p] = c * wp - s * wq;
                    work.rows[row][q] = s * wp + c * wq;
                    let vp = v.rows[row][p];
                    let vq = v.rows[row][q];
                    v.rows[row][p] = c * vp - s * vq;
                    v.rows[row][q] = s * vp + c * vq;
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            panic!("jacobi svd failed to converge within {MAX_JACOBI_SWEEPS} sweeps");
        }

        let mut order = [0usize, 1, 2];
        let norms = [
            work.column(0).norm(),
            work.column(1).norm(),
            work.column(2).norm(),
        ];
        order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

        let mut sigma = [T::zero(); 3];
        let mut u_cols: [Option<Vector3<T>>; 3] = [None, None, None];
        let mut v_cols = [Vector3::zero(); 3];
        let tiny = norms[order[0]] * eps * lit::<T>(4.0);
        for (slot, &idx) in order.iter().enumerate() {
            sigma[slot] = norms[idx];
            v_cols[slot] = v.column(idx);
            if norms[idx] > tiny && norms[idx] > T::zero() {
                u_cols[slot] = Some(work.column(idx).scale(T::one() / norms[idx]));
            }
        }
        let u_cols = complete_orthonormal(u_cols);

        let mut u = Matrix3::zero();
        let mut vt = Matrix3::zero();
        for j in 0..3 {
            for i in 0..3 {
                u.rows[i][j] = u_cols[j][i];
                vt.rows[j][i] = v_cols[j][i];
            }
        }
        Svd3 { u, sigma, vt }
    }

    /// Minimum-norm least-squares solution of `self * x = v` through the SVD,
    /// with singular values below `1e-12 * sigma_max` treated as zero.
    pub fn pseudo_solve(&self, v: &Vector3<T>) -> Vector3<T> {
        let svd = self.svd();
        let cutoff = lit::<T>(1e-12) * svd.sigma[0];
        let mut x = Vector3::zero();
        for i in 0..3 {
            if svd.sigma[i] <= cutoff || svd.sigma[i] == T::zero() {
                continue;
            }
            let coef = svd.u.column(i).dot(v) / svd.sigma[i];
            let vi = Vector3([svd.vt.rows[i][0], svd.vt.rows[i][1], svd.vt.rows[i][2]]);
            x = x + vi.scale(coef);
        }
        x
    }
}

/// Fill in missing orthonormal columns (zero singular values) so `u` stays
/// orthogonal.
fn complete_orthonormal<T: Scalar>(cols: [Option<Vector3<T>>; 3]) -> [Vector3<T>; 3] {
    let mut have: Vec<Vector3<T>> = cols.iter().flatten().copied().collect();
    while have.len() < 3 {
        let candidate = match have.len() {
            0 => Vector3::new(T::one(), T::zero(), T::zero()),
            1 => {
                // axis least aligned with the existing column
                let u0 = have[0];
                let mut best = 0;
                for k in 1..3 {
                    if u0[k].abs() < u0[best].abs() {
                        best = k;
                    }
                }
                let mut e = Vector3::zero();
                e[best] = T::one();
                let w = e - u0.scale(e.dot(&u0));
                w.scale(T::one() / w.norm())
            }
            _ => cross(&have[0], &have[1]),
        };
        have.push(candidate);
    }
    [have[0], have[1], have[2]]
}

fn cross<T: Scalar>(a: &Vector3<T>, b: &Vector3<T>) -> Vector3<T> {
    Vector3([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

impl<T: Scalar> Add for Matrix3<T> {
    type Output = Matrix3<T>;
    fn add(self, rhs: Self) -> Self {
        let mut rows = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rows[i][j] = self.rows[i][j] + rhs.rows[i][j];
            }
        }
        Matrix3 { rows }
    }
}

impl<T: Scalar> Sub for Matrix3<T> {
    type Output = Matrix3<T>;
    fn sub(self, rhs: Self) -> Self {
        let mut rows = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rows[i][j] = self.rows[i][j] - rhs.rows[i][j];
            }
        }
        Matrix3 { rows }
    }
}

impl<T: Scalar> Mul for Matrix3<T> {
    type Output = Matrix3<T>;
    fn mul(self, rhs: Self) -> Self {
        let mut rows = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rows[i][j] = self.rows[i][0] * rhs.rows[0][j]
                    + self.rows[i][1] * rhs.rows[1][j]
                    + self.rows[i][2] * rhs.rows[2][j];
            }
        }
        Matrix3 { rows }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix3<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.rows[i][j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.rows[i][j]
    }
}
