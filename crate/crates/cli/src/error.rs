use thiserror::Error;

/// Failures of a subcommand, each tied to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit 1. The message carries the offending configuration.
    #[error("{0}")]
    Violation(String),

    /// Exit 2.
    #[error("{0}")]
    Input(String),

    /// Exit 3.
    #[error("singular field point: within {distance:e} m of magnet {index}")]
    Singular { index: usize, distance: f64 },
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Violation(_) => 1,
            Self::Input(_) => 2,
            Self::Singular { .. } => 3,
        }
    }
}

impl From<magalg_core::Error> for CliError {
    fn from(e: magalg_core::Error) -> Self {
        match e {
            magalg_core::Error::SingularFieldPoint { index, distance } => Self::Singular { index, distance },
            other => Self::Input(other.to_string()),
        }
    }
}
