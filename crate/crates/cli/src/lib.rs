//! Command-line front end for `magalg-core`: JSON configurations and
//! reports, field-point sweeps to CSV, arrangement generators and a
//! randomized verification suite.
//!
//! Exit codes: 0 ok, 1 theorem violation, 2 input error, 3 singular field
//! point.

pub mod analyze;
pub mod config;
mod error;
pub mod gen;
pub mod sweep;
pub mod verify;

pub use config::ConfigFile;
pub use error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative tolerances shared by analyze, sweep and verify.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Chain inequalities and branch band, times the algebra scale.
    pub rel: f64,
    /// Planarity residual accepted for an invariant plane, times the scale.
    pub planarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: magalg_core::extremal::CHAIN_TOL,
            planarity: magalg_core::DEFAULT_PLANARITY_TOL,
        }
    }
}
