//! `magalg sweep`: the bound chain over a rectangular grid of field points.

use std::fmt::Write as _;
use std::str::FromStr;

use magalg_core::extremal::BruteForceParams;
use magalg_core::structure::{find_invariant_planes, PlaneSearch};
use magalg_core::{
    build_algebra, eig_traceless, gram_spectrum, lambda_bar_bruteforce, select_report, DVec3, Error,
};
use rayon::prelude::*;

use crate::analyze::{abs_lambda_mf, bounds_block};
use crate::{CliError, ConfigFile, Tolerances};

pub const HEADER: &str = "x,y,z,norm_P,abs_lambda_MF,lambda_P,lambda_bar,ub_chain,ub_refined,branch";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.start
        } else {
            let t = i as f64 / (self.count - 1) as f64;
            self.start + (self.stop - self.start) * t
        }
    }
}

/// Per-axis `start:stop:count` triples, every count at least one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepGrid {
    pub axes: [Axis; 3],
}

impl FromStr for SweepGrid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: String| CliError::Input(format!("invalid grid {s:?}: {why}"));
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(bad(format!("expected 3 axes, got {}", parts.len())));
        }
        let mut axes = [Axis {
            start: 0.0,
            stop: 0.0,
            count: 1,
        }; 3];
        for (k, part) in parts.iter().enumerate() {
            let f: Vec<&str> = part.trim().split(':').collect();
            if f.len() != 3 {
                return Err(bad(format!("axis {k} must be start:stop:count")));
            }
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("axis {k}: {t:?} is not a finite number")))
            };
            let count = f[2]
                .trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("axis {k}: {:?} is not a count", f[2])))?;
            if count == 0 {
                return Err(bad(format!("axis {k} is empty")));
            }
            axes[k] = Axis {
                start: num(f[0])?,
                stop: num(f[1])?,
                count,
            };
        }
        Ok(Self { axes })
    }
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `i` in x-fastest order.
    pub fn point(&self, i: usize) -> DVec3 {
        let [ax, ay, az] = self.axes;
        let (ix, rest) = (i % ax.count, i / ax.count);
        let (iy, iz) = (rest % ay.count, rest / ay.count);
        DVec3::new(ax.value(ix), ay.value(iy), az.value(iz))
    }
}

/// One CSV row. `values` is `None` at singular points.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub point: DVec3,
    pub values: Option<RowValues>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowValues {
    pub norm_p: Option<f64>,
    pub abs_lambda_mf: f64,
    pub lambda_p: Option<f64>,
    pub lambda_bar: f64,
    pub ub_chain: Option<f64>,
    pub ub_refined: Option<f64>,
    pub branch: &'static str,
}

fn cell(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        write!(out, "{v}").unwrap();
    }
    out.push(',');
}

impl Row {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in [self.point.x, self.point.y, self.point.z] {
            cell(&mut s, Some(c));
        }
        match &self.values {
            None => s.push_str(",,,,,,singular"),
            Some(v) => {
                cell(&mut s, v.norm_p);
                cell(&mut s, Some(v.abs_lambda_mf));
                cell(&mut s, v.lambda_p);
                cell(&mut s, Some(v.lambda_bar));
                cell(&mut s, v.ub_chain);
                cell(&mut s, v.ub_refined);
                s.push_str(v.branch);
            }
        }
        s
    }
}

pub fn evaluate(cfg: &ConfigFile, point: DVec3, params: BruteForceParams, tols: Tolerances) -> Result<Row, CliError> {
    let dipoles = cfg.dipole_config(point, false)?;
    let alg = match build_algebra(&dipoles) {
        Ok(a) => a,
        Err(Error::SingularFieldPoint { .. }) => return Ok(Row { point, values: None }),
        Err(e) => return Err(e.into()),
    };
    let spectrum = gram_spectrum(&alg);
    let bf = lambda_bar_bruteforce(&alg, params)?;
    let planes = match find_invariant_planes(&alg, tols.planarity) {
        Ok(p) => p,
        Err(Error::TrivialAlgebra) => PlaneSearch {
            planes: Vec::new(),
            degenerate: false,
        },
        Err(e) => return Err(e.into()),
    };
    let selected = select_report(&alg, &planes, bf, tols.rel)?;
    let (plane_index, report) = match &selected {
        Some((i, r)) => (*i, Some(r)),
        None => (None, None),
    };
    let bounds = bounds_block(report, spectrum.lambda_f);
    Ok(Row {
        point,
        values: Some(RowValues {
            norm_p: report.map(|r| r.norm_p),
            abs_lambda_mf: abs_lambda_mf(report, || eig_traceless(&alg.operator(spectrum.m_f)).abs_lambda()),
            lambda_p: report.filter(|_| plane_index.is_some()).map(|r| r.lambda_p),
            lambda_bar: report.map_or(bf.lambda_bar, |r| r.lambda_bar),
            ub_chain: bounds.chain_upper,
            ub_refined: bounds.refined,
            branch: report.map_or("NON_PLANAR", |r| r.branch.as_str()),
        }),
    })
}

/// Rows for every grid point, computed in parallel and returned in grid order.
pub fn run(cfg: &ConfigFile, grid: &SweepGrid, params: BruteForceParams, tols: Tolerances) -> Result<Vec<Row>, CliError> {
    if grid.is_empty() {
        return Err(CliError::input("empty grid"));
    }
    if !(tols.rel > 0.0) || !(tols.planarity > 0.0) {
        return Err(CliError::input("tolerances must be positive"));
    }
    (0..grid.len())
        .into_par_iter()
        .map(|i| evaluate(cfg, grid.point(i), params, tols))
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid() {
        let g: SweepGrid = "-1:1:3, 0:0:1,0.5:1.5:2".parse().unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(0), DVec3::new(-1.0, 0.0, 0.5));
        assert_eq!(g.point(1), DVec3::new(0.0, 0.0, 0.5));
        assert_eq!(g.point(3), DVec3::new(-1.0, 0.0, 1.5));
        assert_eq!(g.point(5), DVec3::new(1.0, 0.0, 1.5));
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["0:1:0,0:1:1,0:1:1", "0:1:2,0:1:2", "0:1,0:1:1,0:1:1", "a:1:1,0:1:1,0:1:1", "0:1:-1,0:0:1,0:0:1", "0:inf:2,0:0:1,0:0:1"] {
            let e = s.parse::<SweepGrid>().unwrap_err();
            assert_eq!(e.exit_code(), 2, "{s}");
        }
    }

    #[test]
    fn singular_rows_keep_coordinates() {
        let r = Row {
            point: DVec3::new(1.0, 0.0, -0.5),
            values: None,
        };
        assert_eq!(r.to_csv(), "1,0,-0.5,,,,,,,singular");
        assert_eq!(r.to_csv().split(',').count(), HEADER.split(',').count());
    }

    #[test]
    fn floats_use_shortest_round_trip_form() {
        let v = 0.1 + 0.2;
        let r = Row {
            point: DVec3::new(v, 1e-7, 2.0),
            values: None,
        };
        let first: Vec<f64> = r.to_csv().split(',').take(3).map(|t| t.parse().unwrap()).collect();
        assert_eq!(first, vec![v, 1e-7, 2.0]);
        assert!(r.to_csv().starts_with("0.30000000000000004,"));
    }
}
