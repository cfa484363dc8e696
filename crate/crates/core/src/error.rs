//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too coarse: required resolution ~{required:.3e}, got {got:.3e}")]
    GridTooCoarse { required: f64, got: f64 },

    #[error("linear solve did not converge: residual {residual:.3e} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },

    #[error("modulus problem mask is disconnected between the boundary sets")]
    DisconnectedMask,

    #[error("target unreachable on the grid at this resolution")]
    UnreachableTarget,

    #[error("estimate invalid: censored fraction {0:.3e} exceeds 1e-3")]
    EstimateInvalid(f64),

    #[error("too few valid radii: need {needed}, have {have}")]
    TooFewRadii { needed: usize, have: usize },

    #[error("profile has no delta_full values; rerun with delta_full enabled")]
    MissingDeltaFull,

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: String, found: String },

    #[error("malformed file: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("domain spec: {0}")]
    Spec(#[from] serde_json::Error),
}
