use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("theta = {0} deg is outside the open interval (0, 180)")]
    ThetaOutOfRange(f64),

    #[error("sensor index {index} out of range for {n_sensors} sensors")]
    SensorIndexOutOfRange { index: usize, n_sensors: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    #[error("sensor count {0} outside the supported range 1..=12")]
    SensorCountOutOfRange(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state not normalized: norm deviates from 1 by {deficit:.3e}")]
    NotNormalized { deficit: f64 },

    #[error("amplitude at index {0} is not finite")]
    NonFiniteAmplitude(usize),

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("{0}")]
    DomainError(String),

    #[error(
        "theta = {theta} deg is outside the orthogonal regime [{low}, {high}] deg for n = {n}"
    )]
    OutsideOrthogonalRegime {
        theta: f64,
        n: usize,
        low: f64,
        high: f64,
    },

    #[error(
        "theta = {theta} deg lies inside the orthogonal regime [{low}, {high}] deg for n = {n}; \
         use the orthogonal-regime construction"
    )]
    InsideOrthogonalRegime {
        theta: f64,
        n: usize,
        low: f64,
        high: f64,
    },

    #[error("states are linearly dependent (Gram min eigenvalue {0:.3e}); unambiguous discrimination is infeasible")]
    LinearlyDependent(f64),

    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    SolverNotConverged { residual: f64, iterations: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("state format: {0}")]
    StateFormat(String),
}
