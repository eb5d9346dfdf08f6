use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while building or evaluating an interpolation formula.
#[derive(Debug, Error)]
pub enum Error {
    #[error("omega must be nonzero, got {0}")]
    OmegaZero(f64),

    #[error("|cos(omega)| is below {tol:e} for omega = {omega}; the boundary closed forms are singular")]
    OmegaSingular { omega: f64, tol: f64 },

    #[error("number of intervals must be at least 1, got {0}")]
    BadN(i64),

    #[error("omega must be finite, got {0}")]
    OmegaNotFinite(f64),

    #[error("numerically degenerate discrete operator: {0}")]
    NumericallyDegenerate(String),

    #[error("evaluation point z = {0} lies outside [0, 1]")]
    ZOutOfRange(f64),

    #[error("boundary 2x2 system is singular (det = {det:e}, scale = {scale:e})")]
    SingularBoundarySystem { det: f64, scale: f64 },

    #[error("dense system is singular: pivot {pivot:e} at column {column} (threshold {threshold:e})")]
    SingularSystem {
        pivot: f64,
        column: usize,
        threshold: f64,
    },

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: node x = {found} does not match beta/N = {expected}")]
    NodeMismatch {
        path: PathBuf,
        line: usize,
        expected: f64,
        found: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericallyDegenerate(_)
                | Error::SingularBoundarySystem { .. }
                | Error::SingularSystem { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
