use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{lambda_bar_bruteforce, lambda_mf_closed_form, lambda_plane, BruteForceParams};
use crate::dipole::build_algebra;
use crate::linalg3::eig_traceless;
use crate::random::{random_generic_config, random_unit};
use crate::structure::{gram_spectrum, PlanarStructure};
use crate::{MagneticAlgebra, Real, Result};

/// Pass/fail plus the worst signed violation (`≤ 0` when satisfied).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremCheck<T> {
    pub passed: bool,
    pub worst: T,
}

impl<T: Real> TheoremCheck<T> {
    fn from_worst(worst: T) -> Self {
        Self {
            passed: worst <= T::zero(),
            worst,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport<T> {
    /// `λ_{M_𝔽}² ≤ λ̄² ≤ 2λ_𝔽/3`
    pub basic_inequality: TheoremCheck<T>,
    /// No sampled `M` has both `λ_M² > λ_{M_𝔽}²` and `r_M > r_{M_𝔽}`.
    pub r_ordering: TheoremCheck<T>,
    /// `‖P‖ ≤ |λ_{M_𝔽}| ≤ λ_P`; absent without a plane.
    pub plane_chain: Option<TheoremCheck<T>>,
    /// `λ̄(𝔽 + 𝔽₁) ≤ λ̄(𝔽) + λ̄(𝔽₁)` for a random dipole algebra `𝔽₁`.
    pub subadditivity: TheoremCheck<T>,
}

impl<T: Real> TheoremReport<T> {
    pub fn all_passed(&self) -> bool {
        self.basic_inequality.passed
            && self.r_ordering.passed
            && self.plane_chain.is_none_or(|c| c.passed)
            && self.subadditivity.passed
    }
}

/// Checks the general spectral theorems on `alg` with `trials` random
/// moments. The random partner for subadditivity is rescaled to the size of
/// `alg` so that neither term swamps the other.
pub fn verify_theorems<T: Real>(
    alg: &MagneticAlgebra<T>,
    plane: Option<&PlanarStructure<T>>,
    trials: usize,
    seed: u64,
    params: BruteForceParams,
) -> Result<TheoremReport<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = alg.tolerance_scale();
    let tol = T::rel_tol(1e-9) * scale;
    let spectrum = gram_spectrum(alg);
    let bf = lambda_bar_bruteforce(alg, params)?;

    let mf = eig_traceless(&alg.operator(spectrum.m_f));
    let lam_mf = mf.abs_lambda();
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    let upper = (bf.lambda_bar + bf.tol_sampling + tol).powi(2);
    let basic_inequality = TheoremCheck::from_worst(
        (lam_mf * lam_mf - upper).max(bf.lambda_bar * bf.lambda_bar - two_thirds * spectrum.lambda_f - tol * scale),
    );

    let mut r_worst = T::neg_infinity();
    for _ in 0..trials {
        let m = random_unit::<T, _>(&mut rng);
        let e = eig_traceless(&alg.operator(m));
        let louder = e.lambda * e.lambda - lam_mf * lam_mf - tol * scale;
        let wider = e.r - mf.r - T::rel_tol(1e-9);
        r_worst = r_worst.max(louder.min(wider));
    }
    let r_ordering = TheoremCheck::from_worst(if trials == 0 { T::zero() } else { r_worst });

    let plane_chain = plane.map(|pl| {
        let pm = lambda_plane(alg, pl, 720);
        let (abs_mf, _) = lambda_mf_closed_form(alg, &spectrum, pl, pm.m_p);
        TheoremCheck::from_worst((pl.norm_p - abs_mf - tol).max(abs_mf - pm.lambda_p - tol))
    });

    let partner = loop {
        let cfg = random_generic_config::<T, _>(&mut rng);
        if let Ok(a) = build_algebra(&cfg) {
            if !a.is_trivial() {
                break a;
            }
        }
    };
    let partner = if alg.is_trivial() { partner } else { partner * (scale / partner.scale()) };
    let b1 = lambda_bar_bruteforce(&partner, params)?;
    let bsum = lambda_bar_bruteforce(&(*alg + partner), params)?;
    let subadditivity = TheoremCheck::from_worst(
        bsum.lambda_bar - bf.lambda_bar - b1.lambda_bar - bf.tol_sampling - b1.tol_sampling - tol,
    );

    Ok(TheoremReport {
        basic_inequality,
        r_ordering,
        plane_chain,
        subadditivity,
    })
}
