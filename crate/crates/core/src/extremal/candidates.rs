use super::{abs_lambda, lambda_plane, newton_self_eigen, self_residual};
use crate::linalg3::Vec3;
use crate::sphere::seeded_lattice;
use crate::structure::{gram_spectrum, PlanarStructure};
use crate::{MagneticAlgebra, Real};

/// Number of seeded starts for the self-eigenvector search.
pub const NEWTON_STARTS: usize = 50;

const NEWTON_ITERS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CandidateKind {
    GramTop,
    InPlaneMax,
    /// `𝔽_M M = λ M`
    EigenSelf,
    /// `det 𝔽_M = 0`
    DetZero,
}

impl CandidateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateKind::GramTop => "GRAM_TOP",
            CandidateKind::InPlaneMax => "IN_PLANE_MAX",
            CandidateKind::EigenSelf => "EIGEN_SELF",
            CandidateKind::DetZero => "DETZERO",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate<T> {
    pub moment: Vec3<T>,
    pub kind: CandidateKind,
    pub lambda_abs: T,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateSet<T> {
    pub candidates: Vec<Candidate<T>>,
}

impl<T: Real> CandidateSet<T> {
    pub fn best(&self) -> Option<&Candidate<T>> {
        self.candidates
            .iter()
            .fold(None, |acc: Option<&Candidate<T>>, c| match acc {
                Some(a) if a.lambda_abs >= c.lambda_abs => Some(a),
                _ => Some(c),
            })
    }

    pub fn of_kind(&self, kind: CandidateKind) -> impl Iterator<Item = &Candidate<T>> {
        self.candidates.iter().filter(move |c| c.kind == kind)
    }

    fn push(&mut self, alg: &MagneticAlgebra<T>, moment: Vec3<T>, kind: CandidateKind) {
        let Some(moment) = moment.normalized() else { return };
        let duplicate = self
            .candidates
            .iter()
            .any(|c| c.kind == kind && c.moment.dot(moment).abs() >= T::one() - T::rel_tol(1e-10));
        if !duplicate {
            self.candidates.push(Candidate {
                moment,
                kind,
                lambda_abs: abs_lambda(alg, moment),
            });
        }
    }
}

/// Candidate locations of the maximizer `M̄`: the top Gram eigenspace, the
/// in-plane maximizer, unit self-eigenvectors found by Newton from
/// [`NEWTON_STARTS`] seeded points, and any of these whose operator is
/// singular.
pub fn locate_candidates<T: Real>(alg: &MagneticAlgebra<T>, plane: Option<&PlanarStructure<T>>, seed: u64) -> CandidateSet<T> {
    let mut set = CandidateSet::default();
    if alg.is_trivial() {
        return set;
    }
    let scale = alg.tolerance_scale();
    for v in gram_spectrum(alg).top_eigenspace {
        set.push(alg, v, CandidateKind::GramTop);
    }
    if let Some(plane) = plane {
        set.push(alg, lambda_plane(alg, plane, 720).m_p, CandidateKind::InPlaneMax);
    }
    let tol = T::rel_tol(1e-9) * scale;
    for x0 in seeded_lattice::<T>(NEWTON_STARTS, seed) {
        let x = newton_self_eigen(alg, x0, NEWTON_ITERS);
        if self_residual(alg, x) <= tol {
            set.push(alg, x, CandidateKind::EigenSelf);
        }
    }
    let det_tol = tol * scale * scale;
    let singular: Vec<Vec3<T>> = set
        .candidates
        .iter()
        .filter(|c| alg.operator(c.moment).det().abs() <= det_tol)
        .map(|c| c.moment)
        .collect();
    for m in singular {
        set.push(alg, m, CandidateKind::DetZero);
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dipole::{build_algebra, DipoleConfig};
    use crate::structure::planar_structure;

    #[test]
    fn single_dipole_axis_is_self_and_gram_top() {
        let alg = build_algebra(&DipoleConfig::new(vec![Vec3::zero()], Vec3::unit_z()).unwrap()).unwrap();
        let plane = planar_structure(&alg, Vec3::unit_y(), 1e-8).unwrap();
        let set = locate_candidates(&alg, Some(&plane), 0);
        let axial = |c: &&Candidate<f64>| c.moment.z.abs() > 1.0 - 1e-9;
        assert!(set.of_kind(CandidateKind::GramTop).any(|c| axial(&c)));
        assert!(set.of_kind(CandidateKind::EigenSelf).any(|c| axial(&c)));
        assert!((set.best().unwrap().lambda_abs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn det_zero_candidates_follow_rank_deficient_formula() {
        let alg = build_algebra(&DipoleConfig::<f64>::new(vec![Vec3::zero()], Vec3::unit_z()).unwrap()).unwrap();
        let set = locate_candidates(&alg, None, 3);
        for c in set.of_kind(CandidateKind::DetZero) {
            let f = alg.operator(c.moment);
            assert!((c.lambda_abs - (f.frobenius_sq() / 2.0).sqrt()).abs() < 1e-9);
        }
    }
}
