use crate::dipole::{build_algebra, DipoleConfig, DEFAULT_EPS_DIST};
use crate::linalg3::Vec3;
use crate::{Error, Real, Result};

/// `μ₀/4π` in T·m/A.
pub const MU0_OVER_4PI: f64 = 1e-7;

/// Field in tesla of a point dipole `moment` (A·m²) at `magnet_pos`,
/// evaluated at `at`: `(μ₀/4π)(3p̂p̂ᵀ − I)M / |p|³`.
pub fn field_b<T: Real>(magnet_pos: Vec3<T>, moment: Vec3<T>, at: Vec3<T>) -> Result<Vec3<T>> {
    let p = at - magnet_pos;
    let d = p.norm();
    if !(d >= T::lit(DEFAULT_EPS_DIST)) {
        return Err(Error::SingularFieldPoint {
            index: 0,
            distance: d.to_f64_lossy(),
        });
    }
    let u = p / d;
    let b = u * (T::lit(3.0) * u.dot(moment)) - moment;
    Ok(b * (T::lit(MU0_OVER_4PI) / (d * d * d)))
}

/// Translational force on a test moment `m` from the array, every magnet
/// carrying moment `big_m`.
///
/// Newtons when `cfg.si_prefactor` is set (prefactor `3μ₀/4π`), otherwise the
/// bare `𝔽_M m`.
pub fn force<T: Real>(cfg: &DipoleConfig<T>, big_m: Vec3<T>, m: Vec3<T>) -> Result<Vec3<T>> {
    let alg = build_algebra(cfg)?;
    let f = alg.product(big_m, m);
    Ok(if cfg.si_prefactor {
        f * T::lit(3.0 * MU0_OVER_4PI)
    } else {
        f
    })
}
