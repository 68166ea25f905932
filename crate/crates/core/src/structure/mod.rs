//! Structure of an abstract magnetic algebra: validity, the Gram matrix
//! `𝔽ᵀ𝔽`, invariant planes and P-decompositions.

mod decomposition;
mod planes;

pub use decomposition::{decompose, Decomposition};
pub use planes::{
    find_invariant_planes, planar_structure, planarity_residual, scan_planarity, PlanarStructure, PlaneSearch,
    DEFAULT_PLANARITY_TOL,
};

use crate::linalg3::{sym_eigen, SymEigen, SymMat3, Vec3};
use crate::{MagneticAlgebra, Real};

/// Relative gap below which two Gram eigenvalues count as one.
pub const GRAM_CLUSTER_TOL: f64 = 1e-8;

/// Result of [`check_algebra`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraCheck<T> {
    /// `max |(𝔽_{e_i} e_j − 𝔽_{e_j} e_i)_k|`
    pub reciprocity_residual: T,
    /// `max |tr 𝔽_{e_i}|`
    pub trace_residual: T,
    /// No basis image rises above the noise floor.
    pub trivial: bool,
}

pub fn check_algebra<T: Real>(alg: &MagneticAlgebra<T>) -> AlgebraCheck<T> {
    AlgebraCheck {
        reciprocity_residual: alg.reciprocity_residual(),
        trace_residual: alg.trace_residual(),
        trivial: alg.is_trivial(),
    }
}

/// `𝔽ᵀ𝔽` and its top eigenpair.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSpectrum<T> {
    /// Entries `tr 𝔽_{e_i} 𝔽_{e_j}`.
    pub gram: SymMat3<T>,
    pub eigen: SymEigen<T>,
    /// Largest eigenvalue `λ_𝔽 = max_{|M|=1} tr 𝔽_M²`.
    pub lambda_f: T,
    /// A unit eigenvector for `λ_𝔽`.
    pub m_f: Vec3<T>,
    /// Orthonormal basis of the `λ_𝔽` eigenspace; its length is the multiplicity.
    pub top_eigenspace: Vec<Vec3<T>>,
}

impl<T: Real> GramSpectrum<T> {
    pub fn multiplicity(&self) -> usize {
        self.top_eigenspace.len()
    }

    /// Indices grouped by (numerically) equal eigenvalue, descending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let v = self.eigen.values;
        let tol = T::rel_tol(GRAM_CLUSTER_TOL) * v[0].abs().max(T::min_positive_value());
        let mut out: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..3 {
            let last = out.last_mut().expect("non-empty");
            if (v[*last.last().expect("non-empty")] - v[k]).abs() <= tol {
                last.push(k);
            } else {
                out.push(vec![k]);
            }
        }
        out
    }
}

pub fn gram_matrix<T: Real>(alg: &MagneticAlgebra<T>) -> SymMat3<T> {
    let b = alg.basis();
    SymMat3::new(
        b[0].frobenius_sq(),
        b[1].frobenius_sq(),
        b[2].frobenius_sq(),
        b[0].trace_of_product(&b[1]),
        b[0].trace_of_product(&b[2]),
        b[1].trace_of_product(&b[2]),
    )
}

pub fn gram_spectrum<T: Real>(alg: &MagneticAlgebra<T>) -> GramSpectrum<T> {
    let gram = gram_matrix(alg);
    let eigen = sym_eigen(&gram);
    let lambda_f = eigen.values[0].max(T::zero());
    let mut spec = GramSpectrum {
        gram,
        eigen,
        lambda_f,
        m_f: eigen.vectors[0],
        top_eigenspace: Vec::new(),
    };
    let top = spec.clusters().remove(0);
    spec.top_eigenspace = top.iter().map(|&k| eigen.vectors[k]).collect();
    spec
}
