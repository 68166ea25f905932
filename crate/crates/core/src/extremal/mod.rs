//! Worst-case force magnitude `λ̄ = max_{|M|=1} |λ_M|`: a brute-force oracle,
//! the in-plane maximum `λ_P`, closed forms and the bounds that tie them
//! together.
//!
//! The trilinear form `T(a, b, c) = cᵀ 𝔽_a b` is fully symmetric, so `λ̄` is
//! also the maximum of `|xᵀ 𝔽_x x|` over unit `x`. That cubic is smooth on
//! the sphere and its critical points are exactly the unit solutions of
//! `𝔽_x x = λ x`, which is what the Newton routines here exploit.

mod analysis;
mod bruteforce;
mod candidates;
mod plane;
mod report;
mod theorems;

pub use analysis::{analyze, select_report, Analysis};
pub use bruteforce::{lambda_bar_bruteforce, BruteForce, BruteForceParams, TOL_SAMPLING_C};
pub use candidates::{locate_candidates, Candidate, CandidateKind, CandidateSet, NEWTON_STARTS};
pub use plane::{choose_m_f, in_plane_abs_lambda, lambda_mf_closed_form, lambda_plane, PlaneMax, MIN_ANGLES};
pub use report::{bounds_report, bounds_report_tol, bounds_report_with, Branch, Bounds, ChainFlags, ExtremalReport, CHAIN_TOL};
pub use theorems::{verify_theorems, TheoremCheck, TheoremReport};

use crate::linalg3::{eig_traceless, Vec3};
use crate::{MagneticAlgebra, Real};

/// `|λ_M|` for the normalized direction of `m`.
pub fn abs_lambda<T: Real>(alg: &MagneticAlgebra<T>, m: Vec3<T>) -> T {
    match m.normalized() {
        Some(u) => eig_traceless(&alg.operator(u)).abs_lambda(),
        None => T::zero(),
    }
}

/// `xᵀ 𝔽_x x`
pub(crate) fn cubic_form<T: Real>(alg: &MagneticAlgebra<T>, x: Vec3<T>) -> T {
    alg.product(x, x).dot(x)
}

/// `‖𝔽_x x − (xᵀ𝔽_x x) x‖`, zero exactly at critical points of the cubic.
pub(crate) fn self_residual<T: Real>(alg: &MagneticAlgebra<T>, x: Vec3<T>) -> T {
    let fx = alg.product(x, x);
    (fx - x * fx.dot(x)).norm()
}

/// Riemannian Newton iteration for a critical point of `x ↦ xᵀ𝔽_x x` on the
/// unit sphere, starting at unit `x0`.
pub(crate) fn newton_self_eigen<T: Real>(alg: &MagneticAlgebra<T>, x0: Vec3<T>, max_iter: usize) -> Vec3<T> {
    let scale = alg.tolerance_scale();
    let max_step = T::lit(0.5);
    let mut x = x0;
    for _ in 0..max_iter {
        let f = alg.operator(x);
        let fx = f.mul_vec(x);
        let g = fx.dot(x);
        let (u, w) = x.orthonormal_pair();
        let grad = [T::lit(3.0) * fx.dot(u), T::lit(3.0) * fx.dot(w)];
        if (grad[0] * grad[0] + grad[1] * grad[1]).sqrt() <= T::epsilon() * T::lit(8.0) * scale {
            break;
        }
        let six = T::lit(6.0);
        let three_g = T::lit(3.0) * g;
        let h00 = six * f.bilinear(u, u) - three_g;
        let h11 = six * f.bilinear(w, w) - three_g;
        let h01 = six * f.bilinear(u, w);
        let det = h00 * h11 - h01 * h01;
        if !(det.abs() > T::epsilon() * scale * scale) {
            break;
        }
        let mut a = -(h11 * grad[0] - h01 * grad[1]) / det;
        let mut b = -(h00 * grad[1] - h01 * grad[0]) / det;
        let len = (a * a + b * b).sqrt();
        if len > max_step {
            a = a * max_step / len;
            b = b * max_step / len;
        }
        match (x + u * a + w * b).normalized() {
            Some(next) => x = next,
            None => break,
        }
    }
    x
}
