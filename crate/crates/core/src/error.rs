use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("out of bounds: {0}")]
    OutOfBounds(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a base position: {0}")]
    NotBasePosition(String),
    #[error("not a facial section: axis {axis}, value {value}")]
    NotFacial { axis: usize, value: usize },
    #[error("position is not convex")]
    NotConvex,
    #[error("illegal move: {0}")]
    IllegalMove(#[from] MoveError),
    #[error("trace step {index}: {source}")]
    TraceStep {
        index: usize,
        #[source]
        source: MoveError,
    },
    #[error("not single-valued: {0}")]
    NotSingleValued(String),
    #[error("not Latin: {0}")]
    NotLatin(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Why a single move was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("cell {cell} has the wrong colour for this direction")]
    WrongColour { cell: String },
    #[error("cell {cell} has {degree} black neighbours, need exactly {expected}")]
    WrongDegree {
        cell: String,
        degree: usize,
        expected: usize,
    },
    #[error("recorded neighbours of {cell} do not match the black neighbourhood")]
    NeighbourMismatch { cell: String },
    #[error("bad coordinate: {0}")]
    BadCoordinate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
