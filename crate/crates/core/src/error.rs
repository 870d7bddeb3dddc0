use std::fmt;

use thiserror::Error;

/// A subset of `{1, ..., n}` rendered with 1-based indices, used in error text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetLabel(pub Vec<usize>);

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid length vector: {0}")]
    InvalidLength(String),

    #[error("index set must be nonempty and proper")]
    ImproperIndexSet,

    #[error("non-generic length vector: epsilon vanishes on I = {set}")]
    SingularLength { set: SetLabel },

    #[error("I = {set} does not bound the chamber: its complement is not a maximal short set")]
    NotAFacet { set: SetLabel },

    #[error("no interior wall point found for I = {set}")]
    DegenerateWall { set: SetLabel },

    #[error("segment is not generic: {0}")]
    NonGenericSegment(String),

    #[error("segment endpoints have different perimeters")]
    PerimeterMismatch,

    #[error("chamber enumeration exceeded the budget of {0} nodes")]
    BudgetExceeded(usize),

    #[error("n = {0} is outside the supported range")]
    UnsupportedSize(usize),

    #[error("signatures are not adjacent across a single wall")]
    NotAdjacent,

    #[error("convention affine:{j} needs 1 <= j <= n = {n}")]
    ConventionOutOfRange { j: usize, n: usize },

    #[error("multi-index differentiates the eliminated variable r_{0}")]
    AffineIndexUsed(usize),

    #[error("total degree {got} does not equal the required {expected}")]
    WrongTotalDegree { expected: u32, got: u32 },

    #[error("degree {0} is out of range")]
    DegreeOutOfRange(u32),

    #[error("the polygon space of this chamber is empty")]
    EmptyChamber,

    #[error("base index {base} is not in I = {set}")]
    BaseNotInSet { base: usize, set: SetLabel },

    #[error("index set I = {set} needs at least two elements")]
    SetTooSmall { set: SetLabel },

    #[error("p = {p}, q = {q} is not a partition of n = {n}")]
    BadPartition { p: usize, q: usize, n: usize },

    #[error("target length vector has an empty polygon space")]
    EmptyTarget,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
