//! Deterministic point sets on the unit sphere.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg3::{Mat3, Vec3};
use crate::Real;

/// `n` points of the spherical Fibonacci lattice.
pub fn fibonacci_sphere<T: Real>(n: usize) -> Vec<Vec3<T>> {
    let golden_angle = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let nf = T::from_count(n);
    (0..n)
        .map(|i| {
            let fi = T::from_count(i);
            let z = T::one() - (T::lit(2.0) * fi + T::one()) / nf;
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let (s, c) = (fi * golden_angle).sin_cos();
            Vec3::new(r * c, r * s, z)
        })
        .collect()
}

/// A rotation drawn uniformly from SO(3), determined by `seed`.
///
/// Seed 0 yields the identity so unseeded lattices stay axis-aligned.
pub fn seeded_rotation<T: Real>(seed: u64) -> Mat3<T> {
    if seed == 0 {
        return Mat3::identity();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Shoemake's uniform unit quaternion.
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (
        a * (tau * u2).sin(),
        a * (tau * u2).cos(),
        b * (tau * u3).sin(),
        b * (tau * u3).cos(),
    );
    let m = [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ];
    Mat3::from_fn(|i, j| T::lit(m[i][j]))
}

/// Fibonacci lattice rotated by [`seeded_rotation`].
pub fn seeded_lattice<T: Real>(n: usize, seed: u64) -> Vec<Vec3<T>> {
    let r = seeded_rotation::<T>(seed);
    fibonacci_sphere(n).into_iter().map(|p| r * p).collect()
}

/// Moves along the great circle from unit `x` toward tangent direction `d`
/// (unit, orthogonal to `x`) by `angle` radians.
pub(crate) fn geodesic_step<T: Real>(x: Vec3<T>, d: Vec3<T>, angle: T) -> Vec3<T> {
    let (s, c) = angle.sin_cos();
    let y = x * c + d * s;
    y.normalized().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_points_are_unit_and_balanced() {
        let pts = fibonacci_sphere::<f64>(1000);
        assert_eq!(pts.len(), 1000);
        for p in &pts {
            assert!((p.norm() - 1.0).abs() < 1e-14);
        }
        let c: Vec3<f64> = pts.iter().copied().sum::<Vec3<f64>>() / 1000.0;
        assert!(c.norm() < 1e-2);
    }

    #[test]
    fn seeded_rotation_is_orthogonal() {
        for seed in [0, 1, 7, 12345] {
            let r = seeded_rotation::<f64>(seed);
            assert!(((r.transpose() * r) - Mat3::identity()).max_abs() < 1e-14);
            assert!((r.det() - 1.0).abs() < 1e-14);
        }
        assert_eq!(seeded_rotation::<f64>(3), seeded_rotation::<f64>(3));
        assert_ne!(seeded_rotation::<f64>(3), seeded_rotation::<f64>(4));
    }

    #[test]
    fn lattice_covers_sphere() {
        let pts = fibonacci_sphere::<f64>(2000);
        let probes = seeded_lattice::<f64>(500, 9);
        let worst = probes
            .iter()
            .map(|q| pts.iter().map(|p| (*p - *q).norm()).fold(f64::MAX, f64::min))
            .fold(0.0, f64::max);
        // Hexagonal covering radius for 2000 points is about 0.05.
        assert!(worst < 0.08, "covering radius {worst}");
    }
}
