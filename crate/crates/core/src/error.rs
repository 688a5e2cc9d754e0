use thiserror::Error;

use crate::det::DetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Det(#[from] DetError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension {0} is outside the supported range 2..=8")]
    DimensionOutOfRange(usize),
    #[error("a simplex in dimension {dim} needs {dim} vertices, got {got}")]
    WrongVertexCount { dim: usize, got: usize },
    #[error("degenerate simplex `{0}`: vertices are affinely dependent")]
    DegenerateSimplex(String),
    #[error("the two simplexes have identical vertex sets")]
    IdenticalSimplexes,
    #[error("degenerate circumsphere: the point is affinely dependent with the simplex")]
    DegenerateCircumsphere,
    #[error("radial vector has zero length")]
    ZeroRadialVector,
    #[error("invalid angle parameter: {0}")]
    InvalidAngle(String),
    #[error("invalid locus selection: {0}")]
    InvalidLocus(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no sign change found: the zero set is empty on this grid")]
    EmptyZeroSet,
    #[error("bracket endpoints have the same sign")]
    NoBracket,
    #[error("mesh is open: {0} boundary edges")]
    OpenMesh(usize),
    #[error("empty input")]
    EmptyInput,
}
