//! `magalg gen`: canonical arrangements as configuration files.

use magalg_core::{gen_cubic_lattice, gen_mirror_symmetric, gen_pair, DVec3};

use crate::config::vec3;
use crate::{CliError, ConfigFile};

fn with_points(positions: Vec<DVec3>, at: &[[f64; 3]]) -> ConfigFile {
    let points = (!at.is_empty()).then(|| at.iter().map(|&p| vec3(p)).collect());
    ConfigFile::new(positions, points)
}

/// Two magnets at `(±sep/2, 0, 0)`.
pub fn pair(sep: f64, at: &[[f64; 3]]) -> Result<ConfigFile, CliError> {
    if !(sep > 0.0) || !sep.is_finite() {
        return Err(CliError::Input(format!("pair separation must be positive, got {sep}")));
    }
    let h = DVec3::new(sep / 2.0, 0.0, 0.0);
    Ok(with_points(gen_pair(h, -h)?.positions, at))
}

/// The cubic lattice `spacing·[-k, k]³`.
pub fn lattice(k: usize, spacing: f64, exclude_origin: bool, at: &[[f64; 3]]) -> Result<ConfigFile, CliError> {
    Ok(with_points(gen_cubic_lattice(spacing, k, exclude_origin)?.positions, at))
}

/// Mirror pairs `u ± t·n̂` plus in-plane magnets, symmetric through the
/// plane through the origin with normal `normal`.
pub fn mirror(normal: [f64; 3], pairs: &[[f64; 4]], points: &[[f64; 3]], at: &[[f64; 3]]) -> Result<ConfigFile, CliError> {
    if pairs.is_empty() && points.is_empty() {
        return Err(CliError::input("mirror arrangement needs at least one --pair or --point"));
    }
    let mirrored: Vec<(DVec3, f64)> = pairs.iter().map(|q| (DVec3::new(q[0], q[1], q[2]), q[3])).collect();
    let singles: Vec<DVec3> = points.iter().map(|&p| vec3(p)).collect();
    Ok(with_points(gen_mirror_symmetric(&mirrored, &singles, vec3(normal))?.positions, at))
}
