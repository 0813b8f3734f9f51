use thiserror::Error;

/// Errors raised by basis construction, model evaluation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zeta = {0} lies outside [0, 1]")]
    Domain(f64),

    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    #[error("dry state: water height h = {0} must be positive")]
    DryState(f64),

    #[error("time step {dt} exceeds the stability bound {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("non-finite or dry state at t = {time}, cell {cell}")]
    Instability { time: f64, cell: usize },

    #[error("unknown basis id `{0}`")]
    UnknownBasis(String),

    #[error("relative error undefined: reference has zero L1 norm")]
    ZeroReference,
}

pub type Result<T> = std::result::Result<T, Error>;
