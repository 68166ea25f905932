//! `magalg verify`: randomized theorem and identity checks.
//!
//! Without a configuration every trial draws a random planar arrangement
//! and probes it with [`MOMENTS_PER_TRIAL`] random moments. With one, every
//! field point of that configuration is probed with `trials` moments.

use std::collections::BTreeMap;

use magalg_core::extremal::{abs_lambda, bounds_report_tol, BruteForceParams};
use magalg_core::random::{random_planar_config, random_unit};
use magalg_core::{
    build_algebra, decompose, eig_traceless, find_invariant_planes, gram_spectrum, lambda_bar_bruteforce,
    lambda_mf_closed_form, lambda_plane, planar_structure, planarity_residual, rot_about, verify_theorems, DDipoleConfig,
    DVec3, Error, PlanarStructure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analyze::Tool;
use crate::{CliError, ConfigFile, Tolerances};

pub const MOMENTS_PER_TRIAL: usize = 100;
const GAMMAS: [f64; 4] = [-1.0, 0.0, 1.0, 5.0];

#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub trials: usize,
    pub seed: u64,
    pub config: Option<ConfigFile>,
    pub params: BruteForceParams,
    pub tols: Tolerances,
}

/// One measured quantity of one trial. Passes when `value ≤ tolerance`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measure {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Measure {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    /// Largest value over all trials: a relative residual for identities,
    /// a signed relative margin for inequalities.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub evaluated: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub checks: Vec<&'static str>,
    pub config: ConfigFile,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub tool: Tool,
    pub mode: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
    pub refine: usize,
    pub moments: usize,
    pub checks: BTreeMap<&'static str, CheckSummary>,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Trial {
    config: DDipoleConfig,
    normal: Option<DVec3>,
    seed: u64,
}

fn config_file(cfg: &DDipoleConfig) -> ConfigFile {
    let mut c = ConfigFile::new(cfg.magnets.iter().copied(), Some(vec![cfg.field_point]));
    c.si_prefactor = cfg.si_prefactor;
    c
}

/// Every measure for one configuration.
pub fn check_config(
    cfg: &DDipoleConfig,
    normal: Option<DVec3>,
    moments: usize,
    seed: u64,
    params: BruteForceParams,
    tols: Tolerances,
) -> Result<Vec<Measure>, CliError> {
    let alg = build_algebra(cfg)?;
    let s = if alg.is_trivial() { 1.0 } else { alg.tolerance_scale() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let (mut tr, mut det, mut rec, mut id) = (0f64, 0f64, 0f64, 0f64);
    for _ in 0..moments {
        let m: DVec3 = random_unit(&mut rng);
        let v: DVec3 = random_unit(&mut rng);
        let f = alg.operator(m);
        tr = tr.max(f.trace().abs() / s);
        det = det.max((f.det() - f.trace_cube() / 3.0).abs() / s.powi(3));
        rec = rec.max((alg.product(m, v) - alg.product(v, m)).max_abs() / s);
        let e = eig_traceless(&f);
        let lhs = f.frobenius_sq();
        id = id.max((lhs - (3.0 + e.r * e.r) / 2.0 * e.lambda * e.lambda).abs() / lhs.max(f64::MIN_POSITIVE));
    }
    out.extend([
        Measure::new("trace", tr, 1e-12),
        Measure::new("det_identity", det, 1e-12),
        Measure::new("reciprocity", rec, 1e-12),
        Measure::new("trace_square_identity", id, 1e-9),
    ]);

    let plane: Option<PlanarStructure<f64>> = match normal {
        Some(n) => {
            out.push(Measure::new("planarity", planarity_residual(&alg, n) / s, 1e-10));
            planar_structure(&alg, n, tols.planarity).ok()
        }
        None => match find_invariant_planes(&alg, tols.planarity) {
            Ok(found) => found.planes.into_iter().next(),
            Err(Error::TrivialAlgebra) => None,
            Err(e) => return Err(e.into()),
        },
    };

    let th = verify_theorems(&alg, plane.as_ref(), moments, seed, params)?;
    out.push(Measure::new("basic_inequality", th.basic_inequality.worst / (s * s), 0.0));
    out.push(Measure::new("r_ordering", th.r_ordering.worst / (s * s), 0.0));
    out.push(Measure::new("subadditivity", th.subadditivity.worst / s, 0.0));
    if let Some(pc) = th.plane_chain {
        out.push(Measure::new("plane_chain", pc.worst / s, 0.0));
    }

    let Some(plane) = plane else {
        return Ok(out);
    };
    let bf = lambda_bar_bruteforce(&alg, params)?;
    let r = bounds_report_tol(&alg, Some(&plane), bf, tols.rel)?;
    let bar = bf.lambda_bar;
    let chain = [
        r.norm_p - r.abs_lambda_mf,
        r.abs_lambda_mf - r.lambda_p,
        r.lambda_p - bar - bf.tol_sampling,
        bar - r.bounds.chain_upper,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    out.push(Measure::new("bound_chain", chain / s, tols.rel));
    let refined = (bar - r.bounds.refined()).max(r.lambda_bar - r.bounds.refined());
    out.push(Measure::new("refined_bound", refined / s, tols.rel));

    let (mut leak, mut equi) = (0f64, 0f64);
    for gamma in GAMMAS {
        let d = decompose(&alg, plane, gamma);
        for _ in 0..5 {
            let m: DVec3 = random_unit(&mut rng);
            leak = leak.max(d.normal_leak(m) / s);
        }
        for _ in 0..3 {
            let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            if let Ok(c) = rot_about(plane.p, angle) {
                let m: DVec3 = random_unit(&mut rng);
                equi = equi.max(d.equivariance_residual(&c, m) / s);
            }
        }
    }
    out.push(Measure::new("decomposition_normal", leak, 1e-10));
    out.push(Measure::new("decomposition_equivariance", equi, 1e-10));

    let spectrum = gram_spectrum(&alg);
    let pm = lambda_plane(&alg, &plane, 720);
    let (closed, m_f) = lambda_mf_closed_form(&alg, &spectrum, &plane, pm.m_p);
    out.push(Measure::new("closed_form_mf", (closed - abs_lambda(&alg, m_f)).abs() / s, 1e-9));
    Ok(out)
}

fn trials_of(req: &VerifyRequest) -> Result<(Vec<Trial>, usize, &'static str), CliError> {
    match &req.config {
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
            let trials = (0..req.trials)
                .map(|_| {
                    let (config, n) = random_planar_config(&mut rng);
                    Trial {
                        config,
                        normal: Some(n),
                        seed: rng.gen(),
                    }
                })
                .collect();
            Ok((trials, MOMENTS_PER_TRIAL, "random_planar"))
        }
        Some(cfg) => {
            let points = cfg.field_points.as_deref().unwrap_or_default();
            if points.is_empty() {
                return Err(CliError::input("config has no field point"));
            }
            let trials = points
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    Ok(Trial {
                        config: cfg.dipole_config(crate::config::vec3(p), false)?,
                        normal: None,
                        seed: req.seed.wrapping_add(j as u64),
                    })
                })
                .collect::<Result<_, CliError>>()?;
            Ok((trials, req.trials, "config"))
        }
    }
}

pub fn run(req: &VerifyRequest) -> Result<VerifyReport, CliError> {
    if req.trials == 0 {
        return Err(CliError::input("trials must be at least 1"));
    }
    if !(req.tols.rel > 0.0) || !(req.tols.planarity > 0.0) {
        return Err(CliError::input("tolerances must be positive"));
    }
    let (trials, moments, mode) = trials_of(req)?;
    let results: Vec<Vec<Measure>> = trials
        .par_iter()
        .map(|t| check_config(&t.config, t.normal, moments, t.seed, req.params, req.tols))
        .collect::<Result<_, _>>()?;

    let mut checks: BTreeMap<&'static str, CheckSummary> = BTreeMap::new();
    let mut violations = Vec::new();
    for (i, (trial, measures)) in trials.iter().zip(&results).enumerate() {
        for m in measures {
            let e = checks.entry(m.name).or_insert(CheckSummary {
                worst: f64::NEG_INFINITY,
                tolerance: m.tolerance,
                passed: true,
                evaluated: 0,
            });
            e.worst = e.worst.max(m.value);
            e.passed &= m.passed();
            e.evaluated += 1;
        }
        let failed: Vec<&'static str> = measures.iter().filter(|m| !m.passed()).map(|m| m.name).collect();
        if !failed.is_empty() {
            violations.push(Violation {
                trial: i,
                checks: failed,
                config: config_file(&trial.config),
            });
        }
    }
    Ok(VerifyReport {
        tool: Tool::current(),
        mode,
        seed: req.seed,
        trials: req.trials,
        samples: req.params.n_samples,
        refine: req.params.refine_steps,
        moments,
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(trials: usize, seed: u64) -> VerifyRequest {
        VerifyRequest {
            trials,
            seed,
            config: None,
            params: BruteForceParams {
                n_samples: 1_000,
                refine_steps: 30,
                seed: 0,
            },
            tols: Tolerances::default(),
        }
    }

    #[test]
    fn random_planar_trials_pass() {
        let r = run(&request(6, 5)).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        for name in ["trace", "planarity", "bound_chain", "decomposition_normal", "closed_form_mf", "subadditivity"] {
            assert_eq!(r.checks[name].evaluated, 6, "{name}");
        }
    }

    #[test]
    fn replay_is_identical() {
        let a = run(&request(3, 9)).unwrap();
        let b = run(&request(3, 9)).unwrap();
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn zero_trials_is_an_input_error() {
        assert_eq!(run(&request(0, 1)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn failing_measures_are_reported() {
        let m = Measure::new("x", 2e-12, 1e-12);
        assert!(!m.passed());
        assert!(Measure::new("x", -1.0, 0.0).passed());
    }
}
