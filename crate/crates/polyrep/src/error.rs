use thiserror::Error;

use crate::num::RatVec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input has no vertices")]
    NoVertices,

    #[error("H-representation is invalid: {0}")]
    InvalidHRep(String),

    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),

    #[error("input polyhedron is bounded; projectivization not needed")]
    BoundedInput,

    #[error("input polyhedron has a nontrivial lineality space")]
    NonPointed,

    #[error("vertex {0:?} is not simple; its projective image may not be simple")]
    NonSimpleVertexChoice(RatVec),

    #[error("rho mode `dimension` requires r_min >= 1/(d+1); got a smaller ratio")]
    RhoDimensionUnjustified,

    #[error("nonpositive denominator in approximating polynomial term {0}")]
    NonpositiveDenominator(usize),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
