use std::ops::{Add, Deref, Mul, Neg, Sub};

use crate::linalg3::{Mat3, Vec3};
use crate::{Error, Real, Result};

/// A symmetric 3×3 matrix stored as its six independent entries.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymMat3<T> {
    pub a11: T,
    pub a22: T,
    pub a33: T,
    pub a12: T,
    pub a13: T,
    pub a23: T,
}

impl<T: Real> SymMat3<T> {
    pub const fn new(a11: T, a22: T, a33: T, a12: T, a13: T, a23: T) -> Self {
        Self {
            a11,
            a22,
            a33,
            a12,
            a13,
            a23,
        }
    }

    pub fn zero() -> Self {
        Self::default_zero()
    }

    fn default_zero() -> Self {
        let z = T::zero();
        Self::new(z, z, z, z, z, z)
    }

    pub fn identity() -> Self {
        Self::scaled_identity(T::one())
    }

    pub fn scaled_identity(s: T) -> Self {
        let z = T::zero();
        Self::new(s, s, s, z, z, z)
    }

    pub fn diag(d1: T, d2: T, d3: T) -> Self {
        let z = T::zero();
        Self::new(d1, d2, d3, z, z, z)
    }

    /// `a aᵀ`
    pub fn outer_self(a: Vec3<T>) -> Self {
        Self::new(a.x * a.x, a.y * a.y, a.z * a.z, a.x * a.y, a.x * a.z, a.y * a.z)
    }

    /// `a bᵀ + b aᵀ`
    pub fn sym_outer(a: Vec3<T>, b: Vec3<T>) -> Self {
        let two = T::lit(2.0);
        Self::new(
            two * a.x * b.x,
            two * a.y * b.y,
            two * a.z * b.z,
            a.x * b.y + b.x * a.y,
            a.x * b.z + b.x * a.z,
            a.y * b.z + b.y * a.z,
        )
    }

    /// Symmetric part of a general matrix.
    pub fn from_mat3_symmetrized(m: &Mat3<T>) -> Self {
        let h = T::lit(0.5);
        Self::new(
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            h * (m[(0, 1)] + m[(1, 0)]),
            h * (m[(0, 2)] + m[(2, 0)]),
            h * (m[(1, 2)] + m[(2, 1)]),
        )
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.a11,
            (1, 1) => self.a22,
            (2, 2) => self.a33,
            (0, 1) => self.a12,
            (0, 2) => self.a13,
            (1, 2) => self.a23,
            _ => panic!("SymMat3 index ({i},{j}) out of range"),
        }
    }

    pub fn to_mat3(&self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.get(i, j))
    }

    pub fn entries(&self) -> [T; 6] {
        [self.a11, self.a22, self.a33, self.a12, self.a13, self.a23]
    }

    fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::new(
            f(self.a11),
            f(self.a22),
            f(self.a33),
            f(self.a12),
            f(self.a13),
            f(self.a23),
        )
    }

    fn zip(&self, o: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self::new(
            f(self.a11, o.a11),
            f(self.a22, o.a22),
            f(self.a33, o.a33),
            f(self.a12, o.a12),
            f(self.a13, o.a13),
            f(self.a23, o.a23),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.a11 * v.x + self.a12 * v.y + self.a13 * v.z,
            self.a12 * v.x + self.a22 * v.y + self.a23 * v.z,
            self.a13 * v.x + self.a23 * v.y + self.a33 * v.z,
        )
    }

    /// `vᵀ A w`
    #[inline]
    pub fn bilinear(&self, v: Vec3<T>, w: Vec3<T>) -> T {
        v.dot(self.mul_vec(w))
    }

    pub fn trace(&self) -> T {
        self.a11 + self.a22 + self.a33
    }

    pub fn det(&self) -> T {
        self.a11 * (self.a22 * self.a33 - self.a23 * self.a23)
            - self.a12 * (self.a12 * self.a33 - self.a23 * self.a13)
            + self.a13 * (self.a12 * self.a23 - self.a22 * self.a13)
    }

    /// `tr(A B)`, equal to the ℝ⁹ inner product for symmetric matrices.
    pub fn trace_of_product(&self, o: &Self) -> T {
        let two = T::lit(2.0);
        self.a11 * o.a11
            + self.a22 * o.a22
            + self.a33 * o.a33
            + two * (self.a12 * o.a12 + self.a13 * o.a13 + self.a23 * o.a23)
    }

    /// `tr A²`, the squared Frobenius norm.
    pub fn frobenius_sq(&self) -> T {
        self.trace_of_product(self)
    }

    pub fn frobenius_norm(&self) -> T {
        self.frobenius_sq().sqrt()
    }

    /// `tr A³`
    pub fn trace_cube(&self) -> T {
        let m = self.to_mat3();
        (m * m * m).trace()
    }

    pub fn max_abs(&self) -> T {
        self.entries()
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `C A Cᵀ`
    pub fn congruence(&self, c: &Mat3<T>) -> Self {
        Self::from_mat3_symmetrized(&(*c * self.to_mat3() * c.transpose()))
    }

    /// Removes the trace: `A - (tr A / 3) I`.
    pub fn traceless_part(&self) -> TracelessSymMat3<T> {
        let s = self.trace() / T::lit(3.0);
        TracelessSymMat3(*self - Self::scaled_identity(s))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }
}

impl<T: Real> Add for SymMat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.zip(&o, |a, b| a + b)
    }
}

impl<T: Real> Sub for SymMat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.zip(&o, |a, b| a - b)
    }
}

impl<T: Real> Neg for SymMat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<T: Real> Mul<T> for SymMat3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Mul<Vec3<T>> for SymMat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.mul_vec(v)
    }
}

/// A symmetric 3×3 matrix with zero trace.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TracelessSymMat3<T>(SymMat3<T>);

impl<T: Real> TracelessSymMat3<T> {
    /// Checks `|tr A| ≤ 1e-12 · max(max|a_ij|, 1)`.
    pub fn new(m: SymMat3<T>) -> Result<Self> {
        let tol = T::rel_tol(1e-12) * m.max_abs().max(T::one());
        let tr = m.trace();
        if tr.abs() > tol || !m.is_finite() {
            return Err(Error::NotTraceless {
                trace: tr.to_f64_lossy(),
            });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix whose trace is zero by construction.
    pub const fn new_unchecked(m: SymMat3<T>) -> Self {
        Self(m)
    }

    pub fn zero() -> Self {
        Self(SymMat3::zero())
    }

    pub fn as_sym(&self) -> &SymMat3<T> {
        &self.0
    }

    pub fn into_sym(self) -> SymMat3<T> {
        self.0
    }
}

impl<T> Deref for TracelessSymMat3<T> {
    type Target = SymMat3<T>;
    fn deref(&self) -> &SymMat3<T> {
        &self.0
    }
}

impl<T: Real> Add for TracelessSymMat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(self.0 + o.0)
    }
}

impl<T: Real> Sub for TracelessSymMat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(self.0 - o.0)
    }
}

impl<T: Real> Mul<T> for TracelessSymMat3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self(self.0 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_products_match_dense() {
        let a = SymMat3::<f64>::new(1.0, -2.0, 0.5, 0.3, -0.7, 1.1);
        let b = SymMat3::new(0.2, 0.4, -1.5, 2.0, 0.1, -0.6);
        let dense = (a.to_mat3() * b.to_mat3()).trace();
        assert!((a.trace_of_product(&b) - dense).abs() < 1e-14);
        let m = a.to_mat3();
        assert!((a.det() - m.det()).abs() < 1e-14);
    }

    #[test]
    fn traceless_rejects_trace() {
        assert!(TracelessSymMat3::new(SymMat3::diag(1.0, 1.0, -2.0)).is_ok());
        let err = TracelessSymMat3::new(SymMat3::diag(1.0, 1.0, -1.0)).unwrap_err();
        assert!(matches!(err, Error::NotTraceless { .. }));
    }

    #[test]
    fn traceless_det_is_trace_cube_over_three() {
        let a = SymMat3::<f64>::new(0.3, -1.2, 0.9, 0.4, -0.8, 0.25);
        let t = a.traceless_part();
        assert!(t.trace().abs() < 1e-15);
        assert!((t.det() - t.trace_cube() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sym_outer_matches_dense() {
        let a = Vec3::new(1.0, 2.0, -0.5);
        let b = Vec3::new(-0.3, 0.7, 1.5);
        let dense = a.outer(b) + b.outer(a);
        assert_eq!(SymMat3::sym_outer(a, b).to_mat3(), dense);
    }
}
