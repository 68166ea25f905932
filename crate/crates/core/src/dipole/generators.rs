//! Canonical magnet arrangements.

use crate::dipole::{DipoleConfig, DEFAULT_EPS_DIST};
use crate::linalg3::Vec3;
use crate::{Error, Real, Result};

/// Magnet positions awaiting a field point.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnetArray<T> {
    pub positions: Vec<Vec3<T>>,
}

impl<T: Real> MagnetArray<T> {
    pub fn new(positions: Vec<Vec3<T>>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        Ok(Self { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn translated(&self, by: Vec3<T>) -> Self {
        Self {
            positions: self.positions.iter().map(|&p| p + by).collect(),
        }
    }

    /// Places the test magnet at `field_point`.
    pub fn at(&self, field_point: Vec3<T>) -> DipoleConfig<T> {
        DipoleConfig::new(self.positions.clone(), field_point)
            .expect("magnet arrays are never empty")
    }
}

/// Two magnets at `o_plus` and `o_minus`.
pub fn gen_pair<T: Real>(o_plus: Vec3<T>, o_minus: Vec3<T>) -> Result<MagnetArray<T>> {
    if !((o_plus - o_minus).norm() >= T::lit(DEFAULT_EPS_DIST)) {
        return Err(Error::CoincidentMagnets {
            first: 0,
            second: 1,
        });
    }
    MagnetArray::new(vec![o_plus, o_minus])
}

/// An arrangement symmetric under reflection through the plane through the
/// origin with normal `plane_normal`.
///
/// Each `(u, t)` in `mirrored` emits the pair `u ± t·n̂`; each point of
/// `in_plane` emits one magnet. Offsets are projected onto the plane first.
pub fn gen_mirror_symmetric<T: Real>(
    mirrored: &[(Vec3<T>, T)],
    in_plane: &[Vec3<T>],
    plane_normal: Vec3<T>,
) -> Result<MagnetArray<T>> {
    let n = plane_normal
        .normalized()
        .ok_or_else(|| Error::InvalidParameter("plane normal has zero length".into()))?;
    if mirrored.is_empty() && in_plane.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut positions = Vec::with_capacity(2 * mirrored.len() + in_plane.len());
    for &(u, t) in mirrored {
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "mirror height must be positive, got {t}"
            )));
        }
        let u = u.reject(n);
        positions.push(u + n * t);
        positions.push(u - n * t);
    }
    positions.extend(in_plane.iter().map(|&q| q.reject(n)));
    MagnetArray::new(positions)
}

/// Magnets on the integer lattice `[-k, k]³` scaled by `spacing`.
pub fn gen_cubic_lattice<T: Real>(spacing: T, half_extent: usize, exclude_origin: bool) -> Result<MagnetArray<T>> {
    if !(spacing > T::zero()) || !spacing.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lattice spacing must be positive, got {spacing}"
        )));
    }
    if half_extent == 0 {
        return Err(Error::InvalidParameter("lattice half extent must be at least 1".into()));
    }
    let k = half_extent as i64;
    let mut positions = Vec::new();
    for i in -k..=k {
        for j in -k..=k {
            for l in -k..=k {
                if exclude_origin && i == 0 && j == 0 && l == 0 {
                    continue;
                }
                let c = |v: i64| T::lit(v as f64) * spacing;
                positions.push(Vec3::new(c(i), c(j), c(l)));
            }
        }
    }
    MagnetArray::new(positions)
}
