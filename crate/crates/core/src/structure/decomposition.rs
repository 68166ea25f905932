use crate::linalg3::{Mat3, SymMat3, Vec3};
use crate::structure::PlanarStructure;
use crate::{MagneticAlgebra, Real};

/// The split `𝔽_M = 𝔼^γ_M − 𝒫^γ_M` attached to an invariant plane, where
/// `𝔼^γ_M = PMᵀ + MPᵀ + (M·P)I − γPPᵀ` commutes with rotations about `P`
/// and `𝒫^γ_M` annihilates the normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<T> {
    pub gamma: T,
    pub plane: PlanarStructure<T>,
    alg: MagneticAlgebra<T>,
}

pub fn decompose<T: Real>(alg: &MagneticAlgebra<T>, plane: PlanarStructure<T>, gamma: T) -> Decomposition<T> {
    Decomposition {
        gamma,
        plane,
        alg: *alg,
    }
}

impl<T: Real> Decomposition<T> {
    pub fn e_operator(&self, m: Vec3<T>) -> SymMat3<T> {
        let p = self.plane.p;
        SymMat3::sym_outer(p, m) + SymMat3::scaled_identity(m.dot(p)) - SymMat3::outer_self(p) * self.gamma
    }

    pub fn p_operator(&self, m: Vec3<T>) -> SymMat3<T> {
        self.e_operator(m) - *self.alg.operator(m).as_sym()
    }

    /// `max_k |n̂·(𝒫^γ_M e_k)|`
    pub fn normal_leak(&self, m: Vec3<T>) -> T {
        self.p_operator(m).mul_vec(self.plane.n_hat).max_abs()
    }

    /// `‖𝔼^γ_{CM} − C 𝔼^γ_M Cᵀ‖_F` for a rotation `c` (expected to fix `P`).
    pub fn equivariance_residual(&self, c: &Mat3<T>, m: Vec3<T>) -> T {
        let lhs = self.e_operator(*c * m);
        let rhs = self.e_operator(m).congruence(c);
        (lhs - rhs).frobenius_norm()
    }
}
