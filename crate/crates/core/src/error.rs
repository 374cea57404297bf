use thiserror::Error;

use crate::perm::Letter;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation {0} is reducible")]
    Reducible(String),
    #[error("tie: letters {top} and {bottom} have equal length, induction undefined")]
    Tie { top: Letter, bottom: Letter },
    #[error("point {0} lies on a subinterval endpoint")]
    Boundary(String),
    #[error("point {0} lies outside the interval")]
    OutOfRange(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("diagram exceeds the vertex budget of {0}")]
    DiagramTooLarge(usize),
    #[error("covering does not commute with move {eps} at labeled vertex {vertex}")]
    Commutation { vertex: usize, eps: char },
    #[error("matrix has a negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("polynomial has no real root greater than 1")]
    NoRootAboveOne,
    #[error("eigenvalue {0} is not simple at working precision (residual {1:e})")]
    IllConditioned(f64, f64),
    #[error("path is not closed: {0}")]
    OpenPath(String),
    #[error("labeled base does not project to the path start")]
    BaseMismatch,
    #[error("loop budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("no primitive loop found")]
    NoPrimitiveLoop,
    #[error("loop is not primitive")]
    NotPrimitive,
    #[error("broken lines intersect: requires zippered rectangles")]
    SelfIntersection,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("polygons do not match under the 180 degree rotation: {0}")]
    RotationMismatch(String),
    #[error("path endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("orders sum to {0}, expected -4 on the sphere")]
    GaussBonnet(i64),
    #[error("parse error: {0}")]
    Parse(String),
}
