//! Spectra of symmetric 3×3 matrices.
//!
//! Traceless matrices get a closed-form solution of the depressed cubic
//! `t³ - (tr A²/2) t - tr A³/3 = 0` by the trigonometric method. General
//! symmetric matrices (the Gram matrix, eigenvectors of `𝔽_M`) go through a
//! cyclic Jacobi iteration, which keeps eigenvectors orthonormal even when
//! eigenvalues coincide.

use crate::linalg3::{SymMat3, TracelessSymMat3, Vec3};
use crate::Real;

/// Spectrum of a traceless symmetric matrix in principal form.
///
/// The eigenvalues are `λ`, `-λ/2 + δ` and `-λ/2 - δ`, where `λ` has the
/// largest magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTriple<T> {
    /// Principal eigenvalue (largest magnitude, positive on ties).
    pub lambda: T,
    /// Half-gap of the remaining pair, `0 ≤ δ ≤ |λ|/2`.
    pub delta: T,
    /// Spread ratio `2δ/|λ|` in `[0, 1]`; zero when `λ = 0`.
    pub r: T,
}

impl<T: Real> EigenTriple<T> {
    pub fn zero() -> Self {
        Self {
            lambda: T::zero(),
            delta: T::zero(),
            r: T::zero(),
        }
    }

    /// `[λ, -λ/2 + δ, -λ/2 - δ]`
    pub fn eigenvalues(&self) -> [T; 3] {
        let half = self.lambda * T::lit(0.5);
        [self.lambda, -half + self.delta, -half - self.delta]
    }

    pub fn abs_lambda(&self) -> T {
        self.lambda.abs()
    }
}

/// Closed-form principal spectrum of a traceless symmetric matrix.
pub fn eig_traceless<T: Real>(a: &TracelessSymMat3<T>) -> EigenTriple<T> {
    let tr2 = a.frobenius_sq();
    if !(tr2 > T::zero()) {
        return EigenTriple::zero();
    }
    // Eigenvalues are 2s·cos(φ + 2πk/3) with s² = tr A²/6.
    let s = (tr2 / T::lit(6.0)).sqrt();
    let b = a.as_sym().scale(s.recip());
    let half_det = b.det() * T::lit(0.5);
    let c = half_det.max(-T::one()).min(T::one());
    let phi = c.acos() / T::lit(3.0);
    let two = T::lit(2.0);
    let third_turn = T::lit(2.0) * T::FRAC_PI_3();
    let t_hi = two * phi.cos();
    let t_lo = two * (phi + third_turn).cos();
    let t_mid = -t_hi - t_lo;

    // cos 3φ ≥ 0 ⇔ t_hi ≥ |t_lo|; ties resolve toward the positive root.
    let (lambda, delta) = if c >= -T::rel_tol(1e-12) {
        (t_hi, (t_mid - t_lo) * T::lit(0.5))
    } else {
        (t_lo, (t_hi - t_mid) * T::lit(0.5))
    };
    let lambda = lambda * s;
    let delta = (delta * s).max(T::zero()).min(lambda.abs() * T::lit(0.5));
    let r = if lambda != T::zero() {
        (two * delta / lambda.abs()).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    EigenTriple { lambda, delta, r }
}

/// Full eigen-decomposition of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEigen<T> {
    /// Eigenvalues in descending order.
    pub values: [T; 3],
    /// Orthonormal eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: [Vec3<T>; 3],
}

impl<T: Real> SymEigen<T> {
    /// Index of the eigenvalue with the largest magnitude; positive wins ties.
    pub fn principal_index(&self) -> usize {
        let hi = self.values[0];
        let lo = self.values[2];
        if hi >= -lo {
            0
        } else {
            2
        }
    }
}

/// Cyclic Jacobi eigen-decomposition.
pub fn sym_eigen<T: Real>(a: &SymMat3<T>) -> SymEigen<T> {
    let mut m = a.to_mat3().rows;
    let mut v = [[T::zero(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = a.max_abs();
    if scale > T::zero() {
        for _sweep in 0..64 {
            let off = m[0][1].abs() + m[0][2].abs() + m[1][2].abs();
            if off <= T::epsilon() * T::lit(1e-3) * scale {
                break;
            }
            for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = m[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..3 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..3 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[j][j].partial_cmp(&m[i][i]).unwrap_or(std::cmp::Ordering::Equal));
    let col = |j: usize| Vec3::new(v[0][j], v[1][j], v[2][j]);
    SymEigen {
        values: [m[order[0]][order[0]], m[order[1]][order[1]], m[order[2]][order[2]]],
        vectors: [col(order[0]), col(order[1]), col(order[2])],
    }
}

/// Unit eigenvector belonging to the principal eigenvalue.
pub fn principal_eigenvector<T: Real>(a: &TracelessSymMat3<T>) -> Vec3<T> {
    let e = sym_eigen(a.as_sym());
    e.vectors[e.principal_index()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn diagonal_reads_off() {
        let a = TracelessSymMat3::new(SymMat3::diag(1.0, 1.0, -2.0)).unwrap();
        let e = eig_traceless(&a);
        assert!(close(e.lambda, -2.0, 1e-14));
        assert!(close(e.delta, 0.0, 1e-14));
        assert!(close(e.r, 0.0, 1e-14));
    }

    #[test]
    fn zero_matrix() {
        let e = eig_traceless(&TracelessSymMat3::<f64>::zero());
        assert_eq!(e, EigenTriple::zero());
    }

    #[test]
    fn swap_matrix_prefers_positive() {
        let a = TracelessSymMat3::new(SymMat3::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0)).unwrap();
        let e = eig_traceless(&a);
        assert!(close(e.lambda, 1.0, 1e-14), "{e:?}");
        assert!(close(e.delta, 0.5, 1e-14));
        assert!(close(e.r, 1.0, 1e-14));
        let mut ev = e.eigenvalues();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(close(ev[0], -1.0, 1e-14) && close(ev[1], 0.0, 1e-14) && close(ev[2], 1.0, 1e-14));
    }

    #[test]
    fn negated_swap_still_prefers_positive() {
        let a = TracelessSymMat3::new(SymMat3::new(0.0, 0.0, 0.0, 0.0, -3.0, 0.0)).unwrap();
        let e = eig_traceless(&a);
        assert!(close(e.lambda, 3.0, 1e-13), "{e:?}");
    }

    #[test]
    fn jacobi_handles_repeated_eigenvalues() {
        let e = sym_eigen(&SymMat3::<f64>::diag(2.0, 6.0, 2.0));
        assert_eq!(e.values[0], 6.0);
        assert!(close(e.vectors[0].y.abs(), 1.0, 1e-15));
        let ortho = e.vectors[1].dot(e.vectors[2]);
        assert!(ortho.abs() < 1e-15);
    }

    #[test]
    fn principal_vector_of_axial_matrix() {
        let a = TracelessSymMat3::new(SymMat3::<f64>::diag(1.0, 1.0, -2.0)).unwrap();
        let v = principal_eigenvector(&a);
        assert!(close(v.z.abs(), 1.0, 1e-15));
    }

    #[test]
    fn works_in_single_precision() {
        let a = TracelessSymMat3::new(SymMat3::<f32>::diag(1.0, 1.0, -2.0)).unwrap();
        let e = eig_traceless(&a);
        assert!((e.lambda + 2.0).abs() < 1e-5);
    }
}
