use std::fmt;

use super::{in_plane_abs_lambda, lambda_bar_bruteforce, lambda_mf_closed_form, lambda_plane, BruteForce, BruteForceParams};
use crate::linalg3::Vec3;
use crate::structure::{gram_spectrum, PlanarStructure};
use crate::{Error, MagneticAlgebra, Real, Result};

/// Default relative slack for the closed-form inequalities and half-width
/// of the band around `λ_P = 2‖P‖` treated as the branch boundary.
pub const CHAIN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `λ_P ≥ 2‖P‖`: the maximum is reached inside the plane and `λ̄ = λ_P`.
    PlaneDominant,
    /// `λ_P < 2‖P‖`
    PDominant,
    /// The operator vanishes identically.
    Degenerate,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::PlaneDominant => "PLANE_DOMINANT",
            Branch::PDominant => "P_DOMINANT",
            Branch::Degenerate => "DEGENERATE",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper bounds on `λ̄`. Branch-specific entries are `None` when they do not
/// apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds<T> {
    /// `|λ_{M_𝔽}| + ‖P‖/2`
    pub chain_upper: T,
    /// `|λ_{M_𝔽}| + ‖P‖/3`, when `λ_P ≤ 2‖P‖`.
    pub refined_mf: Option<T>,
    /// `2‖P‖√(‖P‖/(3‖P‖ − λ_P))`, when `λ_P ≤ 2‖P‖`.
    pub refined_geometric: Option<T>,
    /// `(‖P‖ + √(2λ_𝔽 − 3‖P‖²))/2`, when `λ_P ≥ 2‖P‖`.
    pub plane_dominant: Option<T>,
    /// `√(2λ_𝔽/3)`, valid for every algebra.
    pub basic: T,
}

impl<T: Real> Bounds<T> {
    /// Tightest applicable refined bound (falls back to `chain_upper`).
    pub fn refined(&self) -> T {
        [self.refined_mf, self.refined_geometric, self.plane_dominant]
            .into_iter()
            .flatten()
            .fold(self.chain_upper, T::min)
    }
}

/// Outcome of each inequality in the chain, evaluated with tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainFlags {
    /// `‖P‖ ≤ |λ_{M_𝔽}|`
    pub p_le_mf: bool,
    /// `|λ_{M_𝔽}| ≤ λ_P`
    pub mf_le_plane: bool,
    /// `λ_P ≤ λ̄` (brute force plus sampling tolerance)
    pub plane_le_bar: bool,
    /// `λ̄ ≤ |λ_{M_𝔽}| + ‖P‖/2`
    pub bar_le_chain: bool,
    /// `λ̄` within the branch's refined bound.
    pub bar_le_refined: bool,
    /// `λ̄² ≤ 2λ_𝔽/3`
    pub bar_le_basic: bool,
}

impl ChainFlags {
    pub fn all(&self) -> bool {
        self.p_le_mf && self.mf_le_plane && self.plane_le_bar && self.bar_le_chain && self.bar_le_refined && self.bar_le_basic
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalReport<T> {
    /// Best value of `λ̄`: `λ_P` on the plane-dominant branch, otherwise the
    /// brute-force lower bound.
    pub lambda_bar: T,
    pub bruteforce: BruteForce<T>,
    pub norm_p: T,
    pub abs_lambda_mf: T,
    pub m_f: Vec3<T>,
    /// Dimension of the top Gram eigenspace.
    pub m_f_multiplicity: usize,
    pub lambda_f: T,
    pub lambda_p: T,
    pub m_p: Vec3<T>,
    pub branch: Branch,
    /// `λ_P` lies within the tolerance band around `2‖P‖`.
    pub boundary: bool,
    pub bounds: Bounds<T>,
    pub chain: ChainFlags,
    /// Absolute slack used for closed-form comparisons.
    pub tol: T,
}

fn degenerate_report<T: Real>(bf: BruteForce<T>) -> ExtremalReport<T> {
    let z = T::zero();
    ExtremalReport {
        lambda_bar: z,
        bruteforce: bf,
        norm_p: z,
        abs_lambda_mf: z,
        m_f: Vec3::unit_z(),
        m_f_multiplicity: 3,
        lambda_f: z,
        lambda_p: z,
        m_p: Vec3::unit_z(),
        branch: Branch::Degenerate,
        boundary: false,
        bounds: Bounds {
            chain_upper: z,
            refined_mf: None,
            refined_geometric: None,
            plane_dominant: None,
            basic: z,
        },
        chain: ChainFlags {
            p_le_mf: true,
            mf_le_plane: true,
            plane_le_bar: true,
            bar_le_chain: true,
            bar_le_refined: true,
            bar_le_basic: true,
        },
        tol: z,
    }
}

/// Full bound chain for a planar algebra.
///
/// `plane` may be `None` only for a trivial algebra; otherwise
/// [`Error::NonPlanar`] is returned.
pub fn bounds_report<T: Real>(
    alg: &MagneticAlgebra<T>,
    plane: Option<&PlanarStructure<T>>,
    params: BruteForceParams,
) -> Result<ExtremalReport<T>> {
    bounds_report_with(alg, plane, lambda_bar_bruteforce(alg, params)?)
}

/// [`bounds_report`] reusing an existing brute-force result for `alg`.
pub fn bounds_report_with<T: Real>(
    alg: &MagneticAlgebra<T>,
    plane: Option<&PlanarStructure<T>>,
    bf: BruteForce<T>,
) -> Result<ExtremalReport<T>> {
    bounds_report_tol(alg, plane, bf, T::lit(CHAIN_TOL))
}

/// [`bounds_report_with`] with a caller-chosen relative tolerance, used both
/// for the chain checks and as the half-width of the branch band.
pub fn bounds_report_tol<T: Real>(
    alg: &MagneticAlgebra<T>,
    plane: Option<&PlanarStructure<T>>,
    bf: BruteForce<T>,
    rel_tol: T,
) -> Result<ExtremalReport<T>> {
    if !(rel_tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {rel_tol}")));
    }
    if bf.degenerate {
        return Ok(degenerate_report(bf));
    }
    let plane = plane.ok_or(Error::NonPlanar)?;
    let scale = alg.tolerance_scale();
    let tol = rel_tol * scale;
    let band = rel_tol * scale;

    let spectrum = gram_spectrum(alg);
    let pm = lambda_plane(alg, plane, 720);
    let (abs_mf, m_f) = lambda_mf_closed_form(alg, &spectrum, plane, pm.m_p);
    let norm_p = plane.norm_p;
    let lambda_f = spectrum.lambda_f;

    // M_𝔽 is itself an in-plane candidate (or the normal, worth ‖P‖).
    let (mut lambda_p, mut m_p) = (pm.lambda_p, pm.m_p);
    if m_f != plane.n_hat {
        let v = in_plane_abs_lambda(alg, plane, m_f);
        if v > lambda_p {
            lambda_p = v;
            m_p = m_f;
        }
    }

    let two_p = T::lit(2.0) * norm_p;
    let gap = lambda_p - two_p;
    let boundary = gap.abs() <= band;
    let branch = if gap >= -band { Branch::PlaneDominant } else { Branch::PDominant };

    let three = T::lit(3.0);
    let basic = (T::lit(2.0) * lambda_f / three).sqrt();
    let refined_ok = branch == Branch::PDominant || boundary;
    let bounds = Bounds {
        chain_upper: abs_mf + norm_p / T::lit(2.0),
        refined_mf: refined_ok.then(|| abs_mf + norm_p / three),
        refined_geometric: refined_ok.then(|| {
            let den = (three * norm_p - lambda_p).max(norm_p);
            two_p * (norm_p / den).sqrt()
        }),
        plane_dominant: (branch == Branch::PlaneDominant)
            .then(|| (norm_p + (T::lit(2.0) * lambda_f - three * norm_p * norm_p).max(T::zero()).sqrt()) / T::lit(2.0)),
        basic,
    };

    let bar = bf.lambda_bar;
    let lambda_bar = if branch == Branch::PlaneDominant { lambda_p } else { bar };
    let chain = ChainFlags {
        p_le_mf: norm_p <= abs_mf + tol,
        mf_le_plane: abs_mf <= lambda_p + tol,
        plane_le_bar: lambda_p <= bar + bf.tol_sampling + tol,
        bar_le_chain: bar <= bounds.chain_upper + tol,
        bar_le_refined: bar <= bounds.refined() + tol && lambda_bar <= bounds.refined() + tol,
        bar_le_basic: bar <= basic + tol,
    };

    Ok(ExtremalReport {
        lambda_bar,
        bruteforce: bf,
        norm_p,
        abs_lambda_mf: abs_mf,
        m_f,
        m_f_multiplicity: spectrum.multiplicity(),
        lambda_f,
        lambda_p,
        m_p,
        branch,
        boundary,
        bounds,
        chain,
        tol,
    })
}
