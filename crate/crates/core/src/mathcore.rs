//! Fixed-dimension linear algebra in R³.
//!
//! Everything the controller touches (angular velocity, MRP attitude, torque,
//! sliding variable, inertia, reaching gain) is a 3-vector or a 3×3 matrix, so
//! the types here are plain arrays with the handful of operations the rest of
//! the crate needs.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::real::Real;

/// Relative determinant threshold below which a 3×3 matrix is treated as singular.
///
/// The test is `|det A| < SINGULAR_DET_TOL · max|Aᵢⱼ|³`; the value suits `f64`.
pub const SINGULAR_DET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MathError {
    #[error("matrix is singular: |det| = {det:e} below threshold {threshold:e}")]
    Singular { det: f64, threshold: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

/// A 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3<T>(pub [T; 3]);

impl<T: Real> Vector3<T> {
    #[inline]
    pub const fn new(x1: T, x2: T, x3: T) -> Self {
        Self([x1, x2, x3])
    }

    /// Builds a vector, rejecting NaN or infinite components.
    pub fn try_new(x1: T, x2: T, x3: T) -> Result<Self, MathError> {
        let v = Self::new(x1, x2, x3);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(MathError::NonFinite("vector"))
        }
    }

    #[inline]
    pub fn zeros() -> Self {
        Self([T::zero(); 3])
    }

    #[inline]
    pub fn from_fn(f: impl FnMut(usize) -> T) -> Self {
        Self(std::array::from_fn(f))
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    #[inline]
    pub fn cross(&self, other: &Self) -> Self {
        cross(self, other)
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    #[inline]
    pub fn scale(&self, k: T) -> Self {
        Self::from_fn(|i| self.0[i] * k)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Outer product `self · otherᵀ`.
    pub fn outer(&self, other: &Self) -> Matrix3<T> {
        Matrix3::from_fn(|r, c| self.0[r] * other.0[c])
    }

    #[inline]
    pub fn as_array(&self) -> &[T; 3] {
        &self.0
    }
}

impl<T> From<[T; 3]> for Vector3<T> {
    fn from(a: [T; 3]) -> Self {
        Self(a)
    }
}

impl<T> From<Vector3<T>> for [T; 3] {
    fn from(v: Vector3<T>) -> Self {
        v.0
    }
}

impl<T> Index<usize> for Vector3<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vector3<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Real> Add for Vector3<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] + rhs.0[i])
    }
}

impl<T: Real> AddAssign for Vector3<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Vector3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] - rhs.0[i])
    }
}

impl<T: Real> SubAssign for Vector3<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> Neg for Vector3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::from_fn(|i| -self.0[i])
    }
}

impl<T: Real> Mul<T> for Vector3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

/// A 3×3 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Matrix3<T>(pub [[T; 3]; 3]);

impl<T: Real> Matrix3<T> {
    #[inline]
    pub const fn from_rows(rows: [[T; 3]; 3]) -> Self {
        Self(rows)
    }

    /// Builds a matrix from nine row-major entries.
    pub fn from_row_slice(entries: &[T; 9]) -> Self {
        Self::from_fn(|r, c| entries[3 * r + c])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self(std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))))
    }

    pub fn zeros() -> Self {
        Self([[T::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::from_diagonal(&Vector3::new(T::one(), T::one(), T::one()))
    }

    pub fn from_diagonal(d: &Vector3<T>) -> Self {
        Self::from_fn(|r, c| if r == c { d[r] } else { T::zero() })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r])
    }

    pub fn row(&self, r: usize) -> Vector3<T> {
        Vector3(self.0[r])
    }

    pub fn diagonal(&self) -> Vector3<T> {
        Vector3::from_fn(|i| self.0[i][i])
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    pub fn mul_vec(&self, v: &Vector3<T>) -> Vector3<T> {
        Vector3::from_fn(|r| self.row(r).dot(v))
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        Self::from_fn(|r, c| (0..3).fold(T::zero(), |acc, k| acc + self.0[r][k] * other.0[k][c]))
    }

    pub fn determinant(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Returns `Some(λ)` when the matrix equals `λ·I` with `λ > 0`, entries compared within `tol`.
    pub fn as_positive_scalar_identity(&self, tol: T) -> Option<T> {
        let lambda = (self.0[0][0] + self.0[1][1] + self.0[2][2]) / T::lit(3.0);
        let scalar = (0..3).all(|r| {
            (0..3).all(|c| {
                let expect = if r == c { lambda } else { T::zero() };
                (self.0[r][c] - expect).abs() <= tol
            })
        });
        (scalar && lambda > T::zero()).then_some(lambda)
    }
}

impl<T> Index<(usize, usize)> for Matrix3<T> {
    type Output = T;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.0[r][c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix3<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.0[r][c]
    }
}

impl<T: Real> Add for Matrix3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl<T: Real> Sub for Matrix3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}

impl<T: Real> Neg for Matrix3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul<Vector3<T>> for Matrix3<T> {
    type Output = Vector3<T>;
    #[inline]
    fn mul(self, v: Vector3<T>) -> Vector3<T> {
        self.mul_vec(&v)
    }
}

impl<T: Real> Mul for Matrix3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_mat(&rhs)
    }
}

impl<T: Real> Mul<T> for Matrix3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

/// Cross-product matrix: `skew(v) · w = v × w`.
pub fn skew<T: Real>(v: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3([[z, -v[2], v[1]], [v[2], z, -v[0]], [-v[1], v[0], z]])
}

pub fn cross<T: Real>(a: &Vector3<T>, b: &Vector3<T>) -> Vector3<T> {
    Vector3::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// LU factorization with partial pivoting of a nonsingular 3×3 matrix.
///
/// Factor once, solve many times: the inertia tensor keeps one of these so the
/// dynamics never form `J⁻¹` explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lu3<T> {
    // Unit-lower L below the diagonal, U on and above it.
    lu: Matrix3<T>,
    perm: [usize; 3],
}

impl<T: Real> Lu3<T> {
    pub fn factor(a: &Matrix3<T>) -> Result<Self, MathError> {
        if !a.is_finite() {
            return Err(MathError::NonFinite("matrix"));
        }
        let scale = a.max_abs();
        let det = a.determinant();
        let threshold = T::lit(SINGULAR_DET_TOL) * scale * scale * scale;
        if scale == T::zero() || det.abs() < threshold {
            return Err(MathError::Singular {
                det: det.to_f64().unwrap_or(f64::NAN),
                threshold: threshold.to_f64().unwrap_or(f64::NAN),
            });
        }

        let mut lu = *a;
        let mut perm = [0, 1, 2];
        for k in 0..3 {
            let pivot = (k..3)
                .max_by(|&i, &j| lu[(i, k)].abs().partial_cmp(&lu[(j, k)].abs()).expect("finite entries"))
                .unwrap_or(k);
            if pivot != k {
                lu.0.swap(pivot, k);
                perm.swap(pivot, k);
            }
            let p = lu[(k, k)];
            for i in (k + 1)..3 {
                let factor = lu[(i, k)] / p;
                lu[(i, k)] = factor;
                for j in (k + 1)..3 {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &Vector3<T>) -> Vector3<T> {
        let lu = &self.lu;
        let mut y = Vector3::from_fn(|i| b[self.perm[i]]);
        for i in 1..3 {
            for j in 0..i {
                y[i] = y[i] - lu[(i, j)] * y[j];
            }
        }
        for i in (0..3).rev() {
            for j in (i + 1)..3 {
                y[i] = y[i] - lu[(i, j)] * y[j];
            }
            y[i] = y[i] / lu[(i, i)];
        }
        y
    }
}

/// Solves `A·x = b` without forming `A⁻¹`.
pub fn solve3<T: Real>(a: &Matrix3<T>, b: &Vector3<T>) -> Result<Vector3<T>, MathError> {
    Ok(Lu3::factor(a)?.solve(b))
}

/// Symmetric (within `tol`, max-norm) with all leading principal minors positive.
pub fn is_symmetric_positive_definite<T: Real>(m: &Matrix3<T>, tol: T) -> bool {
    if !m.is_finite() || (*m - m.transpose()).max_abs() > tol {
        return false;
    }
    let minor1 = m[(0, 0)];
    let minor2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let minor3 = m.determinant();
    minor1 > T::zero() && minor2 > T::zero() && minor3 > T::zero()
}
