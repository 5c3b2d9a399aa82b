use thiserror::Error;

/// Failure to parse one of the text formats (triangulations, signatures,
/// permutations, square-root sums).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error: {message}")]
pub struct ParseError {
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
        }
    }
}

/// Errors raised by the combinatorial, arithmetic and geometric operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closing the edge would glue face ({tet}, {face}) to itself")]
    SelfGluingForbidden { tet: usize, face: usize },
    #[error("triangulation is not connected")]
    NotConnected,
    #[error("triangulation has open faces")]
    NotClosed,
    #[error("triangulation is not orientable")]
    NotOrientable,
    #[error("triangulation is not a combinatorial tetrahedral tessellation")]
    NotCtt,
    #[error("face ({tet}, {face}) does not separate two distinct tetrahedra")]
    InvalidFace { tet: usize, face: usize },
    #[error("edge class {edge} is not a closed order-3 edge with three distinct tetrahedra")]
    InvalidEdge { edge: usize },
    #[error("move would create a flat or negatively oriented tetrahedron")]
    FlatOrNegative,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate shape parameter (0 or 1)")]
    DegenerateShape,
    #[error("interval division by an enclosure containing zero")]
    IndeterminateDivision,
    #[error("argument of a rectangle containing the origin")]
    OriginInRectangle,
    #[error("interval enclosure undecided at maximum precision")]
    PrecisionExhausted,
    #[error("cusp cross section is inconsistent at cusp {cusp}")]
    InconsistentHolonomy { cusp: usize },
    #[error("cusp area {area} is not a positive rational multiple of sqrt(3)")]
    FieldViolation { area: String },
    #[error("face class {face} has positive tilt {tilt}")]
    NotProtoCanonical { face: usize, tilt: String },
    #[error("canonization failed after {retries} randomizations of {steps} steps")]
    CanonizationFailed { steps: usize, retries: usize },
    #[error("tilt of face class {face} undecided")]
    Indeterminate { face: usize },
    #[error("edge class {edge} has exactly one incident opaque face")]
    InconsistentCells { edge: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
