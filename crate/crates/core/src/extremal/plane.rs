use crate::linalg3::Vec3;
use crate::structure::{GramSpectrum, PlanarStructure};
use crate::{MagneticAlgebra, Real};

/// Smallest angular grid accepted by [`lambda_plane`].
pub const MIN_ANGLES: usize = 360;

const GOLDEN_ITERS: usize = 200;

/// `|λ_M|` for unit `M` inside an invariant plane, from `P·M` and `tr 𝔽_M²`
/// alone: `max{(|P·M| + √(2 tr 𝔽_M² − 3|P·M|²))/2, |P·M|}`.
pub fn in_plane_abs_lambda<T: Real>(alg: &MagneticAlgebra<T>, plane: &PlanarStructure<T>, m: Vec3<T>) -> T {
    let pm = plane.p.dot(m).abs();
    let tr2 = alg.operator(m).frobenius_sq();
    let disc = (T::lit(2.0) * tr2 - T::lit(3.0) * pm * pm).max(T::zero());
    ((pm + disc.sqrt()) / T::lit(2.0)).max(pm)
}

/// In-plane maximum `λ_P` and a unit maximizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneMax<T> {
    pub lambda_p: T,
    pub m_p: Vec3<T>,
    /// `P = 0` and the operator vanishes on the plane.
    pub degenerate: bool,
}

/// Maximizes [`in_plane_abs_lambda`] over `M(β) = cos β P̂ + sin β Q̂`,
/// `β ∈ [0, π)`, by a grid of `n_angles` (at least [`MIN_ANGLES`]) followed
/// by golden-section search on the best bracket.
pub fn lambda_plane<T: Real>(alg: &MagneticAlgebra<T>, plane: &PlanarStructure<T>, n_angles: usize) -> PlaneMax<T> {
    let n = n_angles.max(MIN_ANGLES);
    let (u, w) = plane.in_plane_basis();
    let dir = |beta: T| {
        let (s, c) = beta.sin_cos();
        u * c + w * s
    };
    let f = |beta: T| in_plane_abs_lambda(alg, plane, dir(beta));
    let h = T::PI() / T::from_count(n);
    let mut best = (f(T::zero()), 0usize);
    for i in 1..n {
        let v = f(h * T::from_count(i));
        if v > best.0 {
            best = (v, i);
        }
    }
    let centre = h * T::from_count(best.1);
    let (mut a, mut b) = (centre - h, centre + h);
    let ratio = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - (b - a) * ratio;
    let mut d = a + (b - a) * ratio;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if b - a <= T::epsilon() * T::lit(4.0) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * ratio;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * ratio;
            fd = f(d);
        }
    }
    let mut out = (best.0, dir(centre));
    for beta in [c, d] {
        let v = f(beta);
        if v > out.0 {
            out = (v, dir(beta));
        }
    }
    let floor = alg.noise_floor().max(T::min_positive_value());
    PlaneMax {
        lambda_p: out.0,
        m_p: out.1,
        degenerate: plane.norm_p <= floor && out.0 <= floor,
    }
}

/// Picks `M_𝔽` from the top Gram eigenspace so that it lies in `{±n̂} ∪ plane`.
///
/// A simple eigenvalue has its eigenvector either along `n̂` or inside the
/// plane. For a repeated eigenvalue the intersection of the eigenspace with the
/// plane is used; when the whole plane lies in the eigenspace the in-plane
/// maximizer `m_p` is taken.
pub fn choose_m_f<T: Real>(spectrum: &GramSpectrum<T>, plane: &PlanarStructure<T>, m_p: Vec3<T>) -> Vec3<T> {
    let n = plane.n_hat;
    let in_plane = |v: Vec3<T>| v.reject(n).normalized().unwrap_or_else(|| plane.in_plane_basis().0);
    let half = T::lit(0.5).sqrt();
    match spectrum.top_eigenspace.as_slice() {
        [v] => {
            if v.dot(n).abs() > half {
                n
            } else {
                in_plane(*v)
            }
        }
        [a, b] => {
            let (an, bn) = (a.dot(n), b.dot(n));
            let tiny = T::rel_tol(1e-8);
            if an.abs() <= tiny && bn.abs() <= tiny {
                m_p
            } else {
                in_plane(*a * bn - *b * an)
            }
        }
        _ => m_p,
    }
}

/// `|λ_{M_𝔽}|` from the in-plane closed form, with `M_𝔽` from [`choose_m_f`].
///
/// For `M_𝔽 = n̂` the formula reduces to `‖P‖`.
pub fn lambda_mf_closed_form<T: Real>(
    alg: &MagneticAlgebra<T>,
    spectrum: &GramSpectrum<T>,
    plane: &PlanarStructure<T>,
    m_p: Vec3<T>,
) -> (T, Vec3<T>) {
    if alg.is_trivial() {
        return (T::zero(), spectrum.m_f);
    }
    let m_f = choose_m_f(spectrum, plane, m_p);
    let pm = plane.p.dot(m_f).abs();
    let disc = (T::lit(2.0) * spectrum.lambda_f - T::lit(3.0) * pm * pm).max(T::zero());
    (((pm + disc.sqrt()) / T::lit(2.0)).max(pm), m_f)
}
