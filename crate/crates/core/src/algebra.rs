//! The linear map `M ↦ 𝔽_M` into traceless symmetric matrices.

use std::ops::{Add, Mul};

use crate::linalg3::{SymMat3, TracelessSymMat3, Vec3};
use crate::{Error, Real, Result};

/// A magnetic algebra, stored as the images `𝔽_{e₁}, 𝔽_{e₂}, 𝔽_{e₃}` of the
/// standard basis. `𝔽_M = Σ M_k 𝔽_{e_k}`.
///
/// `noise_floor` is the magnitude below which the operator is considered to
/// have cancelled to zero. Dipole-built algebras set it from the size of the
/// individual contributions; for abstract algebras it is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagneticAlgebra<T> {
    basis: [SymMat3<T>; 3],
    noise_floor: T,
}

impl<T: Real> MagneticAlgebra<T> {
    /// Builds an algebra from basis images, checking tracelessness and
    /// reciprocity to `1e-10` relative to the largest image.
    pub fn new(basis: [SymMat3<T>; 3]) -> Result<Self> {
        let alg = Self::from_basis_unchecked(basis);
        let scale = alg.scale().max(T::min_positive_value());
        let tol = T::rel_tol(1e-10) * scale;
        for b in &basis {
            if b.trace().abs() > tol || !b.is_finite() {
                return Err(Error::NotTraceless {
                    trace: b.trace().to_f64_lossy(),
                });
            }
        }
        let residual = alg.reciprocity_residual();
        if residual > tol {
            return Err(Error::NotReciprocal {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(alg)
    }

    /// Wraps basis images without validation.
    pub fn from_basis_unchecked(basis: [SymMat3<T>; 3]) -> Self {
        Self {
            basis,
            noise_floor: T::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_basis_unchecked([SymMat3::zero(); 3])
    }

    pub(crate) fn with_noise_floor(mut self, floor: T) -> Self {
        self.noise_floor = floor;
        self
    }

    pub fn basis(&self) -> &[SymMat3<T>; 3] {
        &self.basis
    }

    pub fn noise_floor(&self) -> T {
        self.noise_floor
    }

    /// `𝔽_M`
    pub fn operator(&self, m: Vec3<T>) -> TracelessSymMat3<T> {
        TracelessSymMat3::new_unchecked(
            self.basis[0] * m.x + self.basis[1] * m.y + self.basis[2] * m.z,
        )
    }

    /// `𝔽_M m`
    pub fn product(&self, big_m: Vec3<T>, m: Vec3<T>) -> Vec3<T> {
        self.operator(big_m).mul_vec(m)
    }

    /// Largest Frobenius norm among the basis images, the natural magnitude
    /// for tolerances.
    pub fn scale(&self) -> T {
        self.basis
            .iter()
            .map(SymMat3::frobenius_norm)
            .fold(T::zero(), T::max)
    }

    /// Scale used for relative tolerances; never zero.
    pub fn tolerance_scale(&self) -> T {
        self.scale()
            .max(self.noise_floor)
            .max(T::min_positive_value())
    }

    pub fn is_trivial(&self) -> bool {
        self.scale() <= self.noise_floor
    }

    /// `max_{i,j,k} |(𝔽_{e_i} e_j − 𝔽_{e_j} e_i)_k|`
    pub fn reciprocity_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = self.basis[i].mul_vec(Vec3::basis(j)) - self.basis[j].mul_vec(Vec3::basis(i));
                worst = worst.max(d.max_abs());
            }
        }
        worst
    }

    pub fn trace_residual(&self) -> T {
        self.basis
            .iter()
            .map(|b| b.trace().abs())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Add for MagneticAlgebra<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            basis: [
                self.basis[0] + o.basis[0],
                self.basis[1] + o.basis[1],
                self.basis[2] + o.basis[2],
            ],
            noise_floor: self.noise_floor + o.noise_floor,
        }
    }
}

impl<T: Real> Mul<T> for MagneticAlgebra<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            basis: self.basis.map(|b| b * s),
            noise_floor: self.noise_floor * s.abs(),
        }
    }
}
