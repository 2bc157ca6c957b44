use thiserror::Error;

/// Errors raised by the geometry, calculus and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid tolerance `{name}` = {value}: must be finite and strictly positive")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("unknown tolerance key `{0}` (expected plane_tol, fd_step, conv_tol or seed)")]
    UnknownToleranceKey(String),

    #[error("closed H-sequence sampling failed after {attempts} attempts: region too thin")]
    RegionTooThin { attempts: usize },

    #[error("H-subdifferential at ({x}, {y}, {t}) is not a singleton")]
    NotSingleton { x: f64, y: f64, t: f64 },

    #[error("lambda must be strictly positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("matrix is not symmetric: A12 = {a12}, A21 = {a21}")]
    NotSymmetric { a12: f64, a21: f64 },

    #[error("operator graph is empty")]
    EmptyGraph,

    #[error("base point is not a node of the operator graph")]
    BaseNotInGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
