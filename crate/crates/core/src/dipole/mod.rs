//! The gradient operator of a synchronized dipole array.
//!
//! For magnets at `o_i` sharing one moment `M` and a test magnet at `p`,
//!
//! ```text
//! 𝔽_M = P Mᵀ + M Pᵀ + (M·P) I − 5 Σ (M·p̂_i) p̂_i p̂_iᵀ / |p_i|⁴
//! P   = Σ p̂_i / |p_i|⁴,    p_i = p − o_i
//! ```
//!
//! The operator is kept bare (units m⁻⁴ per unit moment). The physical
//! force is `(3μ₀/4π) 𝔽_M m`, applied only by [`force`].

mod field;
mod generators;

pub use field::{field_b, force, MU0_OVER_4PI};
pub use generators::{gen_cubic_lattice, gen_mirror_symmetric, gen_pair, MagnetArray};

use crate::linalg3::{SymMat3, TracelessSymMat3, Vec3};
use crate::{Error, MagneticAlgebra, Real, Result};

/// Default singularity guard, in meters.
pub const DEFAULT_EPS_DIST: f64 = 1e-9;

/// Magnet positions plus the field point where the test magnet sits.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleConfig<T> {
    pub magnets: Vec<Vec3<T>>,
    pub field_point: Vec3<T>,
    /// Whether [`force`] includes the `3μ₀/4π` prefactor.
    pub si_prefactor: bool,
    /// Minimum admissible distance between the field point and any magnet.
    pub eps_dist: T,
}

impl<T: Real> DipoleConfig<T> {
    pub fn new(magnets: Vec<Vec3<T>>, field_point: Vec3<T>) -> Result<Self> {
        if magnets.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        Ok(Self {
            magnets,
            field_point,
            si_prefactor: false,
            eps_dist: T::lit(DEFAULT_EPS_DIST),
        })
    }

    pub fn with_si_prefactor(mut self, si: bool) -> Self {
        self.si_prefactor = si;
        self
    }

    /// Same magnets, different field point.
    pub fn at(&self, field_point: Vec3<T>) -> Self {
        Self {
            field_point,
            ..self.clone()
        }
    }

    /// Uniformly scales every position about the origin.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            magnets: self.magnets.iter().map(|&o| o * s).collect(),
            field_point: self.field_point * s,
            ..self.clone()
        }
    }

    /// Relative positions `p_i = p − o_i` with their unit directions and
    /// weights `1/|p_i|⁴`.
    fn offsets(&self) -> Result<Vec<(Vec3<T>, T)>> {
        self.magnets
            .iter()
            .enumerate()
            .map(|(index, &o)| {
                let p = self.field_point - o;
                let d = p.norm();
                if !(d >= self.eps_dist) {
                    return Err(Error::SingularFieldPoint {
                        index,
                        distance: d.to_f64_lossy(),
                    });
                }
                let d2 = d * d;
                Ok((p / d, (d2 * d2).recip()))
            })
            .collect()
    }
}

/// `P = Σ p̂_i / |p_i|⁴`
pub fn p_vector<T: Real>(cfg: &DipoleConfig<T>) -> Result<Vec3<T>> {
    Ok(cfg.offsets()?.into_iter().map(|(u, w)| u * w).sum())
}

/// Assembles the three basis images `𝔽_{e_k}` of the configuration.
pub fn build_algebra<T: Real>(cfg: &DipoleConfig<T>) -> Result<MagneticAlgebra<T>> {
    let offsets = cfg.offsets()?;
    let mut p = Vec3::zero();
    let mut weight_sum = T::zero();
    // s[k] = Σ w (p̂)_k p̂ p̂ᵀ
    let mut s = [SymMat3::zero(); 3];
    for &(u, w) in &offsets {
        p += u * w;
        weight_sum += w;
        let uu = SymMat3::outer_self(u);
        for (k, acc) in s.iter_mut().enumerate() {
            *acc = *acc + uu * (w * u[k]);
        }
    }
    let five = T::lit(5.0);
    let basis = [0, 1, 2].map(|k| {
        let e = Vec3::basis(k);
        SymMat3::sym_outer(p, e) + SymMat3::scaled_identity(p[k]) - s[k] * five
    });
    let floor = T::epsilon() * T::lit(64.0) * weight_sum;
    Ok(MagneticAlgebra::from_basis_unchecked(basis).with_noise_floor(floor))
}

/// Evaluates `𝔽_M` for one moment directly from the defining sum, without
/// going through basis images.
pub fn operator_direct<T: Real>(cfg: &DipoleConfig<T>, m: Vec3<T>) -> Result<TracelessSymMat3<T>> {
    let offsets = cfg.offsets()?;
    let p = p_vector(cfg)?;
    let mut acc = SymMat3::sym_outer(p, m) + SymMat3::scaled_identity(m.dot(p));
    for (u, w) in offsets {
        acc = acc - SymMat3::outer_self(u) * (T::lit(5.0) * m.dot(u) * w);
    }
    Ok(TracelessSymMat3::new_unchecked(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> DipoleConfig<f64> {
        DipoleConfig::new(vec![Vec3::zero()], Vec3::unit_z()).unwrap()
    }

    #[test]
    fn single_dipole_axial_image() {
        let alg = build_algebra(&single()).unwrap();
        let fz = alg.operator(Vec3::unit_z());
        assert_eq!(*fz.as_sym(), SymMat3::diag(1.0, 1.0, -2.0));
    }

    #[test]
    fn single_dipole_transverse_image() {
        let alg = build_algebra(&single()).unwrap();
        let fx = alg.operator(Vec3::unit_x());
        assert_eq!(*fx.as_sym(), SymMat3::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn antipodal_pair_cancels() {
        let cfg = DipoleConfig::<f64>::new(vec![Vec3::unit_z(), -Vec3::unit_z()], Vec3::zero()).unwrap();
        let alg = build_algebra(&cfg).unwrap();
        for b in alg.basis() {
            assert_eq!(*b, SymMat3::zero());
        }
        assert!(alg.is_trivial());
        assert_eq!(p_vector(&cfg).unwrap(), Vec3::zero());
    }

    #[test]
    fn p_vector_examples() {
        assert_eq!(p_vector(&single()).unwrap(), Vec3::unit_z());
        let cfg = DipoleConfig::<f64>::new(
            vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)],
            Vec3::unit_z(),
        )
        .unwrap();
        let p = p_vector(&cfg).unwrap();
        assert!(p.x.abs() < 1e-16 && p.y == 0.0);
        assert!((p.z - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn singular_field_point_names_magnet() {
        let cfg = DipoleConfig::new(
            vec![Vec3::unit_x(), Vec3::new(0.0, 0.0, 1e-12)],
            Vec3::zero(),
        )
        .unwrap();
        match build_algebra(&cfg) {
            Err(Error::SingularFieldPoint { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(p_vector(&cfg).is_err());
    }

    #[test]
    fn empty_configuration_rejected() {
        assert_eq!(
            DipoleConfig::<f64>::new(vec![], Vec3::zero()).unwrap_err(),
            Error::EmptyConfiguration
        );
    }

    #[test]
    fn basis_images_are_traceless_and_reciprocal() {
        let cfg = DipoleConfig::new(
            vec![Vec3::new(0.3, -1.0, 0.2), Vec3::new(1.5, 0.5, -0.4), Vec3::new(-0.2, 0.9, 1.3)],
            Vec3::new(0.1, 0.2, -0.3),
        )
        .unwrap();
        let alg = build_algebra(&cfg).unwrap();
        let scale = alg.scale();
        assert!(alg.trace_residual() <= 1e-13 * scale);
        assert!(alg.reciprocity_residual() <= 1e-13 * scale);
        assert!(MagneticAlgebra::new(*alg.basis()).is_ok());
    }
}
