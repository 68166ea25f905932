//! `magalg analyze`: one configuration in, one JSON report out.

use magalg_core::extremal::{BruteForceParams, ExtremalReport};
use magalg_core::{analyze, build_algebra, eig_traceless, p_vector, Analysis, DMagneticAlgebra, DVec3};
use serde::Serialize;

use crate::config::{array, ConfigFile};
use crate::{CliError, Tolerances, VERSION};

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: "magalg",
            version: VERSION,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    pub seed: u64,
    pub samples: usize,
    pub refine: usize,
    pub tol: f64,
    pub planarity_tol: f64,
    pub si: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PVector {
    pub vector: [f64; 3],
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Gram {
    pub matrix: [[f64; 3]; 3],
    pub eigenvalues: [f64; 3],
    #[serde(rename = "lambda_F")]
    pub lambda_f: f64,
    #[serde(rename = "M_F")]
    pub m_f: [f64; 3],
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraHealth {
    pub reciprocity_residual: f64,
    pub trace_residual: f64,
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Plane {
    pub normal: [f64; 3],
    #[serde(rename = "P")]
    pub p: [f64; 3],
    pub norm_p: f64,
    pub q_hat: Option<[f64; 3]>,
    pub residual: f64,
    pub from_family: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Planes {
    /// Every direction is a normal (single magnet, collinear arrays).
    pub degenerate: bool,
    /// Index of the plane the bounds below refer to.
    pub selected: Option<usize>,
    pub list: Vec<Plane>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaP {
    pub value: f64,
    #[serde(rename = "M_P")]
    pub m_p: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceBlock {
    pub value: f64,
    #[serde(rename = "M_bar")]
    pub big_m_bar: [f64; 3],
    pub m_bar: [f64; 3],
    pub tol_sampling: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaBar {
    pub value: f64,
    /// `"plane"` when the plane maximum is exact, else `"bruteforce"`.
    pub source: &'static str,
    pub bruteforce: BruteForceBlock,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsBlock {
    pub basic: f64,
    pub chain_upper: Option<f64>,
    pub refined_mf: Option<f64>,
    pub refined_geometric: Option<f64>,
    pub plane_dominant: Option<f64>,
    pub refined: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    pub p_le_mf: bool,
    pub mf_le_plane: bool,
    pub plane_le_bar: bool,
    pub bar_le_chain: bool,
    pub bar_le_refined: bool,
    pub bar_le_basic: bool,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateEntry {
    pub kind: &'static str,
    pub moment: [f64; 3],
    pub lambda_abs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub parameters: Parameters,
    pub config: ConfigFile,
    pub field_point: [f64; 3],
    /// Factor turning the geometric force into newtons (`3μ₀/4π` with `--si`).
    pub force_prefactor: f64,
    pub branch: &'static str,
    pub boundary: bool,
    #[serde(rename = "P")]
    pub p: PVector,
    pub gram: Gram,
    pub algebra: AlgebraHealth,
    pub planes: Planes,
    #[serde(rename = "norm_P")]
    pub norm_p: Option<f64>,
    #[serde(rename = "abs_lambda_MF")]
    pub abs_lambda_mf: f64,
    #[serde(rename = "lambda_P")]
    pub lambda_p: Option<LambdaP>,
    pub lambda_bar: LambdaBar,
    pub bounds: BoundsBlock,
    pub chain: Option<Chain>,
    pub candidates: Vec<CandidateEntry>,
}

/// `λ_{M_𝔽}` magnitude: from the plane closed form when a report exists,
/// otherwise straight from the eigensolver.
pub(crate) fn abs_lambda_mf(analysis_report: Option<&ExtremalReport<f64>>, direct: impl FnOnce() -> f64) -> f64 {
    analysis_report.map_or_else(direct, |r| r.abs_lambda_mf)
}

pub(crate) fn bounds_block(report: Option<&ExtremalReport<f64>>, lambda_f: f64) -> BoundsBlock {
    let basic = (2.0 * lambda_f / 3.0).sqrt();
    match report {
        Some(r) => BoundsBlock {
            basic: r.bounds.basic,
            chain_upper: Some(r.bounds.chain_upper),
            refined_mf: r.bounds.refined_mf,
            refined_geometric: r.bounds.refined_geometric,
            plane_dominant: r.bounds.plane_dominant,
            refined: Some(r.bounds.refined()),
        },
        None => BoundsBlock {
            basic,
            chain_upper: None,
            refined_mf: None,
            refined_geometric: None,
            plane_dominant: None,
            refined: None,
        },
    }
}

pub fn params_of(samples: usize, refine: usize, seed: u64) -> BruteForceParams {
    BruteForceParams {
        n_samples: samples,
        refine_steps: refine,
        seed,
    }
}

pub fn run(cfg: &ConfigFile, params: BruteForceParams, tols: Tolerances, si: bool) -> Result<Report, CliError> {
    if !(tols.rel > 0.0) || !(tols.planarity > 0.0) {
        return Err(CliError::input("tolerances must be positive"));
    }
    let field_point = cfg.single_field_point()?;
    let dipoles = cfg.dipole_config(field_point, si)?;
    let alg = build_algebra(&dipoles)?;
    let a = analyze(&alg, params, tols.planarity, tols.rel)?;
    let p = p_vector(&dipoles)?;
    let mut embedded = cfg.at(field_point);
    embedded.si_prefactor = dipoles.si_prefactor;
    Ok(assemble(&alg, &a, embedded, field_point, p, params, tols))
}

fn assemble(
    alg: &DMagneticAlgebra,
    a: &Analysis<f64>,
    config: ConfigFile,
    field_point: DVec3,
    p: DVec3,
    params: BruteForceParams,
    tols: Tolerances,
) -> Report {
    let report = a.report.as_ref();
    let spectrum = &a.spectrum;
    let g = &spectrum.gram;
    let bf = &a.bruteforce;
    let si = config.si_prefactor;
    let lambda_bar_value = a.lambda_bar();
    let exact_plane = report.is_some_and(|r| r.branch == magalg_core::Branch::PlaneDominant);
    Report {
        tool: Tool::current(),
        parameters: Parameters {
            seed: params.seed,
            samples: params.n_samples,
            refine: params.refine_steps,
            tol: tols.rel,
            planarity_tol: tols.planarity,
            si,
        },
        config,
        field_point: array(field_point),
        force_prefactor: if si { 3.0 * magalg_core::MU0_OVER_4PI } else { 1.0 },
        branch: a.branch_name(),
        boundary: report.is_some_and(|r| r.boundary),
        p: PVector {
            vector: array(p),
            norm: p.norm(),
        },
        gram: Gram {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| g.get(i, j))),
            eigenvalues: spectrum.eigen.values,
            lambda_f: spectrum.lambda_f,
            m_f: array(report.map_or(spectrum.m_f, |r| r.m_f)),
            multiplicity: spectrum.multiplicity(),
        },
        algebra: AlgebraHealth {
            reciprocity_residual: a.check.reciprocity_residual,
            trace_residual: a.check.trace_residual,
            trivial: a.check.trivial,
        },
        planes: Planes {
            degenerate: a.planes.degenerate,
            selected: a.plane_index,
            list: a
                .planes
                .planes
                .iter()
                .map(|pl| Plane {
                    normal: array(pl.n_hat),
                    p: array(pl.p),
                    norm_p: pl.norm_p,
                    q_hat: pl.q_hat.map(array),
                    residual: pl.residual,
                    from_family: pl.from_family,
                })
                .collect(),
        },
        norm_p: report.map(|r| r.norm_p),
        abs_lambda_mf: abs_lambda_mf(report, || eig_traceless(&alg.operator(spectrum.m_f)).abs_lambda()),
        lambda_p: report.filter(|_| a.plane_index.is_some()).map(|r| LambdaP {
            value: r.lambda_p,
            m_p: array(r.m_p),
        }),
        lambda_bar: LambdaBar {
            value: lambda_bar_value,
            source: if exact_plane { "plane" } else { "bruteforce" },
            bruteforce: BruteForceBlock {
                value: bf.lambda_bar,
                big_m_bar: array(bf.big_m_bar),
                m_bar: array(bf.m_bar),
                tol_sampling: bf.tol_sampling,
                degenerate: bf.degenerate,
            },
        },
        bounds: bounds_block(report, spectrum.lambda_f),
        chain: report.map(|r| Chain {
            p_le_mf: r.chain.p_le_mf,
            mf_le_plane: r.chain.mf_le_plane,
            plane_le_bar: r.chain.plane_le_bar,
            bar_le_chain: r.chain.bar_le_chain,
            bar_le_refined: r.chain.bar_le_refined,
            bar_le_basic: r.chain.bar_le_basic,
            tol: r.tol,
        }),
        candidates: a
            .candidates
            .candidates
            .iter()
            .map(|c| CandidateEntry {
                kind: c.kind.as_str(),
                moment: array(c.moment),
                lambda_abs: c.lambda_abs,
            })
            .collect(),
    }
}
