use super::{bounds_report_tol, lambda_bar_bruteforce, locate_candidates, BruteForce, BruteForceParams, CandidateSet, ExtremalReport};
use crate::structure::{check_algebra, find_invariant_planes, gram_spectrum, AlgebraCheck, GramSpectrum, PlaneSearch};
use crate::{Error, MagneticAlgebra, Real, Result};

/// Everything known about one algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis<T> {
    pub check: AlgebraCheck<T>,
    pub spectrum: GramSpectrum<T>,
    /// Empty for trivial or non-planar algebras.
    pub planes: PlaneSearch<T>,
    pub bruteforce: BruteForce<T>,
    /// Bound chain on the selected plane; `None` when no plane exists.
    pub report: Option<ExtremalReport<T>>,
    /// Index into `planes.planes` of the plane behind `report`.
    pub plane_index: Option<usize>,
    pub candidates: CandidateSet<T>,
}

impl<T: Real> Analysis<T> {
    pub fn branch_name(&self) -> &'static str {
        self.report.as_ref().map_or("NON_PLANAR", |r| r.branch.as_str())
    }

    /// Best available value of `λ̄`.
    pub fn lambda_bar(&self) -> T {
        self.report.as_ref().map_or(self.bruteforce.lambda_bar, |r| r.lambda_bar)
    }
}

/// Bound chain for the preferred plane of `planes`.
///
/// A plane on the plane-dominant branch wins (its `λ_P` is then exact),
/// otherwise the plane with the tightest refined bound. Trivial algebras
/// get a plane-free degenerate report; non-planar ones get `None`.
pub fn select_report<T: Real>(
    alg: &MagneticAlgebra<T>,
    planes: &PlaneSearch<T>,
    bruteforce: BruteForce<T>,
    rel_tol: T,
) -> Result<Option<(Option<usize>, ExtremalReport<T>)>> {
    if bruteforce.degenerate {
        return Ok(Some((None, bounds_report_tol(alg, None, bruteforce, rel_tol)?)));
    }
    let mut best: Option<(usize, ExtremalReport<T>)> = None;
    for (i, plane) in planes.planes.iter().enumerate() {
        let r = bounds_report_tol(alg, Some(plane), bruteforce, rel_tol)?;
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let key = |r: &ExtremalReport<T>| r.branch == super::Branch::PlaneDominant;
                match (key(&r), key(b)) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => r.bounds.refined() < b.bounds.refined(),
                }
            }
        };
        if better {
            best = Some((i, r));
        }
    }
    Ok(best.map(|(i, r)| (Some(i), r)))
}

/// Runs the plane search, the brute-force oracle and the bound chain.
/// The report plane is picked by [`select_report`]; `rel_tol` is the chain
/// tolerance relative to the algebra scale.
pub fn analyze<T: Real>(
    alg: &MagneticAlgebra<T>,
    params: BruteForceParams,
    planarity_tol: T,
    rel_tol: T,
) -> Result<Analysis<T>> {
    let check = check_algebra(alg);
    let spectrum = gram_spectrum(alg);
    let bruteforce = lambda_bar_bruteforce(alg, params)?;
    let planes = match find_invariant_planes(alg, planarity_tol) {
        Ok(p) => p,
        Err(Error::TrivialAlgebra) => PlaneSearch {
            planes: Vec::new(),
            degenerate: false,
        },
        Err(e) => return Err(e),
    };

    let (plane_index, report) = match select_report(alg, &planes, bruteforce, rel_tol)? {
        Some((i, r)) => (i, Some(r)),
        None => (None, None),
    };
    let plane = plane_index.map(|i| &planes.planes[i]);
    let candidates = locate_candidates(alg, plane, params.seed);
    Ok(Analysis {
        check,
        spectrum,
        planes,
        bruteforce,
        report,
        plane_index,
        candidates,
    })
}
