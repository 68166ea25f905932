use thiserror::Error;

/// Errors raised by construction and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate axis: rotation axis has zero length")]
    DegenerateAxis,

    #[error("singular field point: within {distance:e} m of magnet {index}")]
    SingularFieldPoint { index: usize, distance: f64 },

    #[error("empty configuration: at least one magnet is required")]
    EmptyConfiguration,

    #[error("coincident magnets: positions {first} and {second} coincide")]
    CoincidentMagnets { first: usize, second: usize },

    #[error("matrix is not traceless (trace {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("reciprocity violated: residual {residual:e}")]
    NotReciprocal { residual: f64 },

    #[error("trivial algebra: every basis image vanishes")]
    TrivialAlgebra,

    #[error("not an invariant plane: planarity residual {residual:e} exceeds {tolerance:e}")]
    NotInvariantPlane { residual: f64, tolerance: f64 },

    #[error("no invariant plane: refined bounds need a planar algebra")]
    NonPlanar,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
