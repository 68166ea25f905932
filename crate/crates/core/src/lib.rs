//! Magnetic-gradient operators of synchronized dipole arrays.
//!
//! A set of magnets sharing one moment `M` exerts on a test moment `m` the
//! force `(3μ₀/4π) 𝔽_M m`, where `M ↦ 𝔽_M` is linear, traceless-symmetric
//! valued and reciprocal (`𝔽_M m = 𝔽_m M`). This crate builds that map,
//! finds its invariant planes and computes the worst-case force magnitude
//! `λ̄ = max_{|M|=1} |λ_M|` together with closed-form bounds on it.
//!
//! Everything is generic over [`Real`]; the `D`/`F` aliases fix `f64`/`f32`.
//!
//! ```
//! use magalg_core::{build_algebra, bounds_report, planar_structure, BruteForceParams, DDipoleConfig, DVec3};
//!
//! let cfg = DDipoleConfig::new(vec![DVec3::zero()], DVec3::unit_z()).unwrap();
//! let alg = build_algebra(&cfg).unwrap();
//! let plane = planar_structure(&alg, DVec3::unit_y(), 1e-8).unwrap();
//! let report = bounds_report(&alg, Some(&plane), BruteForceParams::default()).unwrap();
//! assert!((report.lambda_bar - 2.0).abs() < 1e-12);
//! ```

mod algebra;
mod error;
mod scalar;

pub mod dipole;
pub mod extremal;
pub mod linalg3;
pub mod random;
pub mod sphere;
pub mod structure;

pub use algebra::MagneticAlgebra;
pub use dipole::{
    build_algebra, field_b, force, gen_cubic_lattice, gen_mirror_symmetric, gen_pair, operator_direct, p_vector,
    DipoleConfig, MagnetArray, DEFAULT_EPS_DIST, MU0_OVER_4PI,
};
pub use error::{Error, Result};
pub use extremal::{
    analyze, bounds_report, lambda_bar_bruteforce, select_report, lambda_mf_closed_form, lambda_plane, locate_candidates, verify_theorems,
    Analysis, Branch, BruteForce, BruteForceParams, CandidateKind, CandidateSet, ExtremalReport, TheoremReport,
};
pub use linalg3::{cross_matrix, eig_traceless, rot_about, EigenTriple, Mat3, SymMat3, TracelessSymMat3, Vec3};
pub use scalar::Real;
pub use structure::{
    check_algebra, decompose, find_invariant_planes, gram_spectrum, planar_structure, planarity_residual,
    Decomposition, GramSpectrum, PlanarStructure, PlaneSearch, DEFAULT_PLANARITY_TOL,
};

pub type DVec3 = Vec3<f64>;
pub type DMat3 = Mat3<f64>;
pub type DSymMat3 = SymMat3<f64>;
pub type DTracelessSymMat3 = TracelessSymMat3<f64>;
pub type DDipoleConfig = DipoleConfig<f64>;
pub type DMagneticAlgebra = MagneticAlgebra<f64>;

pub type FVec3 = Vec3<f32>;
pub type FMat3 = Mat3<f32>;
pub type FSymMat3 = SymMat3<f32>;
pub type FTracelessSymMat3 = TracelessSymMat3<f32>;
pub type FDipoleConfig = DipoleConfig<f32>;
pub type FMagneticAlgebra = MagneticAlgebra<f32>;
