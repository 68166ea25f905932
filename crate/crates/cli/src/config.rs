//! On-disk configuration schema.
//!
//! ```json
//! {"magnets": [{"position": [0, 0, 0]}], "field_points": [[0, 0, 1]], "si_prefactor": false}
//! ```

use std::fs;
use std::path::Path;

use magalg_core::{DDipoleConfig, DVec3};
use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Magnet {
    pub position: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub magnets: Vec<Magnet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_points: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub si_prefactor: bool,
}

pub fn vec3(a: [f64; 3]) -> DVec3 {
    DVec3::new(a[0], a[1], a[2])
}

pub fn array(v: DVec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl ConfigFile {
    pub fn new(magnets: impl IntoIterator<Item = DVec3>, field_points: Option<Vec<DVec3>>) -> Self {
        Self {
            magnets: magnets.into_iter().map(|p| Magnet { position: array(p) }).collect(),
            field_points: field_points.map(|v| v.into_iter().map(array).collect()),
            si_prefactor: false,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            let kind = match e.classify() {
                Category::Data => "invalid config",
                _ => "malformed JSON",
            };
            CliError::Input(format!("{kind} in {origin} at line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        if !path.is_file() {
            return Err(CliError::Input(format!("config not found: {}", path.display())));
        }
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.magnets.is_empty() {
            return Err(CliError::input("config has no magnets"));
        }
        let finite = |a: &[f64; 3]| a.iter().all(|x| x.is_finite());
        if let Some(i) = self.magnets.iter().position(|m| !finite(&m.position)) {
            return Err(CliError::Input(format!("magnet {i} has a non-finite coordinate")));
        }
        if let Some(i) = self.field_points.iter().flatten().position(|p| !finite(p)) {
            return Err(CliError::Input(format!("field point {i} has a non-finite coordinate")));
        }
        Ok(())
    }

    pub fn positions(&self) -> Vec<DVec3> {
        self.magnets.iter().map(|m| vec3(m.position)).collect()
    }

    /// The single field point an analysis runs at.
    pub fn single_field_point(&self) -> Result<DVec3, CliError> {
        match self.field_points.as_deref() {
            Some([p]) => Ok(vec3(*p)),
            None | Some([]) => Err(CliError::input("config has no field point")),
            Some(ps) => Err(CliError::Input(format!(
                "config has {} field points; analyze takes one (use sweep for several)",
                ps.len()
            ))),
        }
    }

    pub fn dipole_config(&self, field_point: DVec3, si: bool) -> Result<DDipoleConfig, CliError> {
        Ok(DDipoleConfig::new(self.positions(), field_point)?.with_si_prefactor(si || self.si_prefactor))
    }

    /// The configuration analyzed at exactly `field_point`.
    pub fn at(&self, field_point: DVec3) -> Self {
        Self {
            field_points: Some(vec![array(field_point)]),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = ConfigFile::parse(r#"{"magnets":[{"position":[1,2,3]}]}"#, "t").unwrap();
        assert_eq!(c.magnets[0].position, [1.0, 2.0, 3.0]);
        assert!(c.field_points.is_none());
        assert!(!c.si_prefactor);
    }

    #[test]
    fn syntax_errors_report_position() {
        let e = ConfigFile::parse("{\n  \"magnets\": [\n    {\"position\": [1, 2,]}\n]}", "t").unwrap_err();
        let msg = e.to_string();
        assert!(msg.starts_with("malformed JSON"), "{msg}");
        assert!(msg.contains("line 3, column"), "{msg}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = ConfigFile::parse(r#"{"magnets":[{"position":[0,0,0]}],"field_point":[0,0,1]}"#, "t").unwrap_err();
        assert!(e.to_string().starts_with("invalid config"));
    }

    #[test]
    fn empty_magnet_list_is_rejected() {
        assert!(ConfigFile::parse(r#"{"magnets":[]}"#, "t").is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let c = ConfigFile::new([DVec3::new(0.1, -0.2, 1e-7)], Some(vec![DVec3::unit_z()]));
        assert_eq!(ConfigFile::parse(&c.to_json(), "t").unwrap(), c);
    }
}
