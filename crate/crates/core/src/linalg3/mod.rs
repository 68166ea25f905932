//! Fixed-size 3D linear algebra.

mod eigen;
mod mat3;
mod sym;
mod vec3;

pub use eigen::{eig_traceless, principal_eigenvector, sym_eigen, EigenTriple, SymEigen};
pub use mat3::Mat3;
pub use sym::{SymMat3, TracelessSymMat3};
pub use vec3::Vec3;

use crate::{Error, Real, Result};

/// The antisymmetric matrix `[n]` with `[n] v = n × v`.
pub fn cross_matrix<T: Real>(n: Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    Mat3::from_rows([[z, -n.z, n.y], [n.z, z, -n.x], [-n.y, n.x, z]])
}

/// Right-handed rotation by `angle` radians about `axis` (Rodrigues).
pub fn rot_about<T: Real>(axis: Vec3<T>, angle: T) -> Result<Mat3<T>> {
    let k = axis.normalized().ok_or(Error::DegenerateAxis)?;
    let kx = cross_matrix(k);
    let (s, c) = angle.sin_cos();
    Ok(Mat3::identity() + kx.scale(s) + (kx * kx).scale(T::one() - c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_matrix_of_z() {
        let m = cross_matrix(Vec3::<f64>::unit_z());
        assert_eq!(
            m.rows,
            [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        );
        assert_eq!(m * Vec3::unit_x(), Vec3::unit_y());
        assert_eq!(cross_matrix(Vec3::<f64>::zero()), Mat3::zero());
    }

    #[test]
    fn cross_matrix_matches_cross_product() {
        let n = Vec3::new(0.3, -1.2, 2.5);
        let v = Vec3::new(-0.7, 0.4, 1.1);
        let d = cross_matrix(n) * v - n.cross(v);
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rot_about(Vec3::unit_z(), std::f64::consts::FRAC_PI_2).unwrap();
        let d = r * Vec3::unit_x() - Vec3::unit_y();
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn zero_angle_is_identity() {
        let r = rot_about(Vec3::new(1.0, 2.0, 3.0), 0.0).unwrap();
        assert_eq!(r, Mat3::identity());
    }

    #[test]
    fn rotation_is_proper_and_fixes_axis() {
        let axis = Vec3::<f64>::new(0.2, -0.9, 0.4);
        let r = rot_about(axis, 1.234).unwrap();
        assert!((r * axis - axis).norm() < 1e-14);
        assert!((r.det() - 1.0).abs() < 1e-14);
        let rtr = r.transpose() * r;
        assert!((rtr - Mat3::identity()).max_abs() < 1e-14);
    }

    #[test]
    fn zero_axis_is_rejected() {
        assert!(matches!(
            rot_about(Vec3::<f64>::zero(), 1.0),
            Err(Error::DegenerateAxis)
        ));
    }
}
