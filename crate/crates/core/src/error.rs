use thiserror::Error;

use crate::lattice::Segment;

/// Errors raised by the library. Each variant maps to one CLI exit class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector {0:?} is not primitive")]
    NotPrimitive((i64, i64)),
    #[error("edge class ({x},{y}) is invalid: {reason}")]
    InvalidEdgeClass { x: i64, y: i64, reason: &'static str },
    #[error("polygon is not simple: {0}")]
    NotSimple(String),
    #[error("coordinate overflow: {0}")]
    Overflow(String),
    #[error("target edges {0} and {1} intersect at a non-lattice point")]
    IntersectingTargets(Segment, Segment),
    #[error("polygon boundary segment {0} is not a unit edge")]
    NotEquilateralAdmitting(Segment),
    #[error("{0} is not an interior edge of the triangulation")]
    NotInteriorEdge(Segment),
    #[error("the quadrilateral around {0} is not strictly convex")]
    NotConvexQuadrilateral(Segment),
    #[error("{0} is a constraint edge and cannot be flipped")]
    ConstrainedEdge(Segment),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("flip {0} did not produce the planned edge")]
    FlipMismatch(String),
    #[error("constraint {0} is not inside the polygon")]
    ConstraintOutsidePolygon(Segment),
    #[error("constraints {0} and {1} intersect")]
    IntersectingConstraints(Segment, Segment),
    #[error("triangulations are over different polygons")]
    PolygonMismatch,
    #[error("triangulations carry different constraint sets")]
    ConstraintMismatch,
    #[error("triangulation does not contain required edge {0}")]
    MissingEdge(Segment),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("instance too large: {what} is {actual}, guard is {limit}")]
    TooLarge { what: &'static str, actual: usize, limit: usize },
    #[error("no triangulation satisfying the target is reachable")]
    Unreachable,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    TooLarge,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::TooLarge { .. } => ErrorClass::TooLarge,
            Error::Internal(_) | Error::FlipMismatch(_) => ErrorClass::Internal,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
