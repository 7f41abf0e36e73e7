//! Error type shared by every solver module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("metric is not positive at cell {cell} (value {value})")]
    NonPositiveMetric { cell: usize, value: f64 },

    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value {value} at cell {cell}")]
    NonFinite { cell: usize, value: f64 },

    #[error("fields live on different meshes")]
    MeshMismatch,

    #[error("invalid flux: {0}")]
    InvalidFlux(String),

    #[error("time step {dt} violates the CFL bound; admissible dt <= {admissible}")]
    CflViolation { dt: f64, admissible: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge (last change {change:e} after {panels} panels)")]
    QuadratureDiverged { change: f64, panels: usize },

    #[error("flux is not time-like: g(df, df) = {value} at t = {t}, cell {cell}, u = {u}")]
    NotTimelike { t: f64, cell: usize, u: f64, value: f64 },

    #[error("cannot invert the conserved density at cell {cell}: {value} outside [{lo}, {hi}]")]
    InversionFailure { cell: usize, value: f64, lo: f64, hi: f64 },

    #[error("velocity |v| = {v} is not subluminal")]
    Causality { v: f64 },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("geometry degenerate at cell {cell}: beta = {beta}")]
    GeometryDegenerate { cell: usize, beta: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
