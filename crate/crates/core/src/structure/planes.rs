//! Invariant-plane detection.
//!
//! A unit normal `n̂` spans an invariant plane exactly when
//! `[n̂] 𝔽_n̂ [n̂] = 0`. Every such normal is an eigenvector of `𝔽ᵀ𝔽` with
//! eigenvalue `2|P|²`, so the search only has to look inside Gram
//! eigenspaces: a simple eigenvalue contributes one candidate, a repeated one
//! is scanned.

use crate::linalg3::{cross_matrix, Vec3};
use crate::sphere::fibonacci_sphere;
use crate::structure::gram_spectrum;
use crate::{Error, MagneticAlgebra, Real, Result};

/// Default planarity tolerance, relative to [`MagneticAlgebra::tolerance_scale`].
pub const DEFAULT_PLANARITY_TOL: f64 = 1e-8;

const ANGLE_GRID: usize = 720;
const FAMILY_SAMPLES: usize = 8;
const SPHERE_GRID: usize = 2000;
const SCAN_STARTS: usize = 24;

/// Frame of an invariant plane with unit normal `n̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarStructure<T> {
    pub n_hat: Vec3<T>,
    /// `P = 𝔽_n̂ n̂`, orthogonal to `n̂`.
    pub p: Vec3<T>,
    pub norm_p: T,
    /// `P/|P|`, absent when `P` vanishes.
    pub p_hat: Option<Vec3<T>>,
    /// `n̂ × P̂`, spans `ker 𝔽_n̂` inside the plane.
    pub q_hat: Option<Vec3<T>>,
    /// `‖[n̂] 𝔽_n̂ [n̂]‖_F`
    pub residual: T,
    /// `max |𝔽_M n̂ − (P·M) n̂|` over an in-plane basis.
    pub in_plane_residual: T,
    /// Representative of a continuum of invariant planes.
    pub from_family: bool,
}

impl<T: Real> PlanarStructure<T> {
    /// Orthonormal in-plane basis: `(P̂, Q̂)` when `P ≠ 0`, otherwise any.
    pub fn in_plane_basis(&self) -> (Vec3<T>, Vec3<T>) {
        match (self.p_hat, self.q_hat) {
            (Some(p), Some(q)) => (p, q),
            _ => self.n_hat.orthonormal_pair(),
        }
    }

    /// Projection of `m` onto the plane.
    pub fn project(&self, m: Vec3<T>) -> Vec3<T> {
        m.reject(self.n_hat)
    }
}

/// Outcome of [`find_invariant_planes`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSearch<T> {
    pub planes: Vec<PlanarStructure<T>>,
    /// A Gram eigenspace of dimension ≥ 2 consisted entirely of invariant
    /// normals; `planes` then holds sampled representatives.
    pub degenerate: bool,
}

impl<T: Real> PlaneSearch<T> {
    pub fn is_planar(&self) -> bool {
        !self.planes.is_empty()
    }
}

fn residual_matrix_entries<T: Real>(alg: &MagneticAlgebra<T>, n: Vec3<T>) -> [T; 6] {
    let nx = cross_matrix(n);
    let k = nx * alg.operator(n).to_mat3() * nx;
    let r2 = T::lit(std::f64::consts::SQRT_2);
    [
        k[(0, 0)],
        k[(1, 1)],
        k[(2, 2)],
        r2 * T::lit(0.5) * (k[(0, 1)] + k[(1, 0)]),
        r2 * T::lit(0.5) * (k[(0, 2)] + k[(2, 0)]),
        r2 * T::lit(0.5) * (k[(1, 2)] + k[(2, 1)]),
    ]
}

/// `‖[n̂] 𝔽_n̂ [n̂]‖_F` for the normalized direction of `n`.
pub fn planarity_residual<T: Real>(alg: &MagneticAlgebra<T>, n: Vec3<T>) -> T {
    match n.normalized() {
        Some(n) => residual_matrix_entries(alg, n)
            .iter()
            .map(|&v| v * v)
            .sum::<T>()
            .sqrt(),
        None => T::infinity(),
    }
}

/// Builds the frame for normal `n_hat`, failing when the planarity residual
/// exceeds `tol` (relative).
pub fn planar_structure<T: Real>(alg: &MagneticAlgebra<T>, n_hat: Vec3<T>, tol: T) -> Result<PlanarStructure<T>> {
    let n = n_hat
        .normalized()
        .ok_or_else(|| Error::InvalidParameter("plane normal has zero length".into()))?;
    let scale = alg.tolerance_scale();
    let tol_abs = tol * scale;
    let residual = planarity_residual(alg, n);
    if !(residual <= tol_abs) {
        return Err(Error::NotInvariantPlane {
            residual: residual.to_f64_lossy(),
            tolerance: tol_abs.to_f64_lossy(),
        });
    }
    // Drop the (numerically tiny) normal component so that P ⟂ n̂ exactly.
    let p = alg.product(n, n).reject(n);
    let norm_p = p.norm();
    let (p_hat, q_hat) = if norm_p > tol_abs {
        let ph = p / norm_p;
        (Some(ph), Some(n.cross(ph)))
    } else {
        (None, None)
    };
    let mut s = PlanarStructure {
        n_hat: n,
        p,
        norm_p,
        p_hat,
        q_hat,
        residual,
        in_plane_residual: T::zero(),
        from_family: false,
    };
    let (u, w) = s.in_plane_basis();
    s.in_plane_residual = [u, w]
        .iter()
        .map(|&m| (alg.product(m, n) - n * p.dot(m)).norm())
        .fold(T::zero(), T::max);
    Ok(s)
}

/// Levenberg–Marquardt polish of a candidate normal, minimizing the
/// planarity residual over the sphere.
fn refine_normal<T: Real>(alg: &MagneticAlgebra<T>, n0: Vec3<T>) -> Vec3<T> {
    let scale = alg.tolerance_scale();
    let mut n = n0;
    let mut r = residual_matrix_entries(alg, n);
    let norm2 = |r: &[T; 6]| r.iter().map(|&v| v * v).sum::<T>();
    let mut f = norm2(&r);
    let mut damping = T::lit(1e-6);
    let h = T::lit(1e-6);
    for _ in 0..60 {
        if f.sqrt() <= T::epsilon() * scale {
            break;
        }
        let (u, w) = n.orthonormal_pair();
        let mut jac = [[T::zero(); 2]; 6];
        for (c, dir) in [u, w].into_iter().enumerate() {
            let plus = residual_matrix_entries(alg, (n + dir * h).normalized().unwrap_or(n));
            let minus = residual_matrix_entries(alg, (n - dir * h).normalized().unwrap_or(n));
            for k in 0..6 {
                jac[k][c] = (plus[k] - minus[k]) / (T::lit(2.0) * h);
            }
        }
        let mut jtj = [[T::zero(); 2]; 2];
        let mut jtr = [T::zero(); 2];
        for k in 0..6 {
            for a in 0..2 {
                jtr[a] += jac[k][a] * r[k];
                for b in 0..2 {
                    jtj[a][b] += jac[k][a] * jac[k][b];
                }
            }
        }
        let diag_scale = (jtj[0][0] + jtj[1][1]).max(T::min_positive_value());
        let mut improved = false;
        for _ in 0..20 {
            let a00 = jtj[0][0] + damping * diag_scale;
            let a11 = jtj[1][1] + damping * diag_scale;
            let a01 = jtj[0][1];
            let det = a00 * a11 - a01 * a01;
            if !(det.abs() > T::zero()) {
                damping *= T::lit(10.0);
                continue;
            }
            let da = -(a11 * jtr[0] - a01 * jtr[1]) / det;
            let db = -(a00 * jtr[1] - a01 * jtr[0]) / det;
            let cand = (n + u * da + w * db).normalized().unwrap_or(n);
            let rc = residual_matrix_entries(alg, cand);
            let fc = norm2(&rc);
            if fc < f {
                n = cand;
                r = rc;
                f = fc;
                damping = (damping * T::lit(0.1)).max(T::lit(1e-12));
                improved = true;
                break;
            }
            damping *= T::lit(10.0);
        }
        if !improved {
            break;
        }
    }
    n
}

/// Global scan for near-planar normals: Fibonacci lattice followed by local
/// descent from the `n_starts` lowest-residual lattice points.
///
/// Returns refined `(normal, residual)` pairs, lowest residual first,
/// antipodal duplicates removed.
pub fn scan_planarity<T: Real>(alg: &MagneticAlgebra<T>, n_points: usize, n_starts: usize) -> Vec<(Vec3<T>, T)> {
    let lattice = fibonacci_sphere::<T>(n_points.max(1));
    let mut scored: Vec<(usize, T)> = lattice
        .iter()
        .enumerate()
        // Antipodal normals describe the same plane.
        .filter(|(_, p)| p.z >= T::zero())
        .map(|(i, &p)| (i, planarity_residual(alg, p)))
        .collect();
    scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    let mut out: Vec<(Vec3<T>, T)> = Vec::new();
    for &(i, _) in scored.iter().take(n_starts.max(1)) {
        let n = refine_normal(alg, lattice[i]);
        let r = planarity_residual(alg, n);
        push_unique(&mut out, n, r);
    }
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    out
}

fn same_axis<T: Real>(a: Vec3<T>, b: Vec3<T>) -> bool {
    a.dot(b).abs() >= T::one() - T::rel_tol(1e-8)
}

fn push_unique<T: Real>(out: &mut Vec<(Vec3<T>, T)>, n: Vec3<T>, r: T) {
    if let Some(slot) = out.iter_mut().find(|(m, _)| same_axis(*m, n)) {
        if r < slot.1 {
            *slot = (n, r);
        }
    } else {
        out.push((n, r));
    }
}

/// All invariant planes of `alg` at relative tolerance `tol`.
pub fn find_invariant_planes<T: Real>(alg: &MagneticAlgebra<T>, tol: T) -> Result<PlaneSearch<T>> {
    if alg.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    let tol_abs = tol * alg.tolerance_scale();
    let spectrum = gram_spectrum(alg);
    let mut candidates: Vec<(Vec3<T>, T)> = Vec::new();
    let mut families: Vec<Vec3<T>> = Vec::new();
    let mut degenerate = false;

    for cluster in spectrum.clusters() {
        let vecs: Vec<Vec3<T>> = cluster.iter().map(|&k| spectrum.eigen.vectors[k]).collect();
        match vecs.len() {
            1 => {
                let n = refine_normal(alg, vecs[0]);
                push_unique(&mut candidates, n, planarity_residual(alg, n));
            }
            2 => {
                let (u, w) = (vecs[0], vecs[1]);
                let dir = |theta: T| {
                    let (s, c) = theta.sin_cos();
                    u * c + w * s
                };
                let step = T::PI() / T::from_count(ANGLE_GRID);
                let res: Vec<T> = (0..ANGLE_GRID)
                    .map(|i| planarity_residual(alg, dir(step * T::from_count(i))))
                    .collect();
                if res.iter().all(|&r| r <= tol_abs) {
                    degenerate = true;
                    let fstep = T::PI() / T::from_count(FAMILY_SAMPLES);
                    families.extend((0..FAMILY_SAMPLES).map(|k| dir(fstep * T::from_count(k))));
                    continue;
                }
                for i in 0..ANGLE_GRID {
                    let prev = res[(i + ANGLE_GRID - 1) % ANGLE_GRID];
                    let next = res[(i + 1) % ANGLE_GRID];
                    if res[i] <= prev && res[i] <= next {
                        let n = refine_normal(alg, dir(step * T::from_count(i)));
                        push_unique(&mut candidates, n, planarity_residual(alg, n));
                    }
                }
            }
            _ => {
                let lattice = fibonacci_sphere::<T>(SPHERE_GRID);
                if lattice.iter().all(|&p| planarity_residual(alg, p) <= tol_abs) {
                    degenerate = true;
                    families.extend(fibonacci_sphere::<T>(2 * FAMILY_SAMPLES).into_iter().filter(|p| p.z >= T::zero()));
                    continue;
                }
                for (n, r) in scan_planarity(alg, SPHERE_GRID, SCAN_STARTS) {
                    push_unique(&mut candidates, n, r);
                }
            }
        }
    }

    let mut planes = Vec::new();
    for (n, _) in candidates {
        if let Ok(s) = planar_structure(alg, n, tol) {
            if !planes.iter().any(|q: &PlanarStructure<T>| same_axis(q.n_hat, s.n_hat)) {
                planes.push(s);
            }
        }
    }
    for n in families {
        if let Ok(mut s) = planar_structure(alg, n, tol) {
            s.from_family = true;
            if !planes.iter().any(|q: &PlanarStructure<T>| same_axis(q.n_hat, s.n_hat)) {
                planes.push(s);
            }
        }
    }
    Ok(PlaneSearch { planes, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dipole::{build_algebra, DipoleConfig};

    fn single() -> MagneticAlgebra<f64> {
        build_algebra(&DipoleConfig::new(vec![Vec3::zero()], Vec3::unit_z()).unwrap()).unwrap()
    }

    fn pair() -> MagneticAlgebra<f64> {
        build_algebra(
            &DipoleConfig::new(vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)], Vec3::unit_z()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pair_has_both_mirror_planes() {
        // The segment's own plane (normal ŷ) and its perpendicular bisector
        // (normal x̂) are both symmetry planes containing the field point.
        let s = find_invariant_planes(&pair(), 1e-8).unwrap();
        assert_eq!(s.planes.len(), 2, "{:?}", s.planes);
        assert!(!s.degenerate);
        let y = s.planes.iter().find(|pl| (pl.n_hat.y.abs() - 1.0).abs() < 1e-12).expect("y plane");
        assert!((y.norm_p - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        assert!(y.p.x.abs() < 1e-14 && y.p.y.abs() < 1e-14);
        let x = s.planes.iter().find(|pl| (pl.n_hat.x.abs() - 1.0).abs() < 1e-12).expect("x plane");
        assert!((x.p.z + 3.0 / (4.0 * 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn pair_plane_structure() {
        let alg = pair();
        let s = planar_structure(&alg, Vec3::unit_y(), 1e-8).unwrap();
        assert!((s.p - Vec3::new(0.0, 0.0, 1.0 / (2.0 * 2f64.sqrt()))).norm() < 1e-15);
        assert!((s.p_hat.unwrap() - Vec3::unit_z()).norm() < 1e-14);
        assert!((s.q_hat.unwrap() - Vec3::unit_x()).norm() < 1e-14);
        let fy = alg.operator(Vec3::unit_y());
        assert!((fy.frobenius_sq() - 0.25).abs() < 1e-15);
        assert!(s.in_plane_residual < 1e-15);
    }

    #[test]
    fn single_dipole_has_a_family() {
        let s = find_invariant_planes(&single(), 1e-8).unwrap();
        assert!(s.degenerate);
        assert!(s.planes.len() >= FAMILY_SAMPLES);
        for pl in &s.planes {
            assert!(pl.n_hat.z.abs() < 1e-12);
            assert!((pl.p - Vec3::unit_z()).norm() < 1e-12);
        }
    }

    #[test]
    fn single_dipole_plane_structure() {
        let s = planar_structure(&single(), Vec3::unit_y(), 1e-8).unwrap();
        assert!((s.p - Vec3::unit_z()).norm() < 1e-15);
        assert!((single().operator(Vec3::unit_y()).frobenius_sq() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn axial_normal_is_not_a_plane() {
        match planar_structure(&single(), Vec3::unit_z(), 1e-8) {
            Err(Error::NotInvariantPlane { residual, .. }) => assert!(residual > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_algebra_is_rejected() {
        assert_eq!(
            find_invariant_planes(&MagneticAlgebra::<f64>::zero(), 1e-8).unwrap_err(),
            Error::TrivialAlgebra
        );
    }

    #[test]
    fn refinement_recovers_a_perturbed_normal() {
        let alg = pair();
        let n0 = Vec3::new(0.05, 1.0, -0.03).normalized().unwrap();
        let n = refine_normal(&alg, n0);
        assert!(planarity_residual(&alg, n) < 1e-14);
        assert!((n.y.abs() - 1.0).abs() < 1e-12);
    }
}
