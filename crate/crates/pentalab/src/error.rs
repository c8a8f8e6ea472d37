use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carry enough context (an index, a cell, a weight) for callers to
/// locate the offending piece of input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate quadruple: cross ratio denominator vanishes")]
    DegenerateQuadruple,
    #[error("the four points are not collinear")]
    NotCollinear,
    #[error("arguments coincide projectively")]
    CoincidentArguments,
    #[error("quadruple is not in general position")]
    DegeneratePosition,
    #[error("singular projective map")]
    SingularMap,
    #[error("homogeneous triple is identically zero")]
    ZeroTriple,
    #[error("weight {k} is not supported for n = {n}")]
    UnsupportedWeight { n: usize, k: usize },
    #[error("subset contains a triple unit")]
    NotSingletonOnly,
    #[error("pentagram map has a pole at index {index}")]
    MapSingularity { index: usize },
    #[error("degenerate construction at label {label}")]
    DegenerateConstruction { label: i64 },
    #[error("variable index {index} lies outside the table window")]
    WindowExceeded { index: i64 },
    #[error("leading invariant O_n or E_n vanishes")]
    ZeroLeadingInvariant,
    #[error("zero divisor at layer {layer}, cell ({row}, {col})")]
    SingularInterior { layer: i64, row: usize, col: usize },
    #[error("({0}, {1}, {2}) is not a vertex of the octahedral tiling")]
    NotATilingVertex(i64, i64, i64),
    #[error("vertex label at position {index} is zero")]
    ZeroVertexLabel { index: i64 },
    #[error("labelling is not liftable: f_{class} = {value}")]
    NotLiftable { class: usize, value: String },
    #[error("labelling is liftable over an extension only: {0} has no rational root of order {1}")]
    NoRationalLift(String, usize),
    #[error("period n = {n} is not supported here")]
    UnsupportedPeriod { n: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

impl Error {
    /// Process exit status for the failure class: 2 for unreadable input,
    /// 3 for geometric degeneracy, 4 for a pole of the pentagram map and 5
    /// for arguments outside what an operation supports.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::DegenerateQuadruple
            | Error::NotCollinear
            | Error::CoincidentArguments
            | Error::DegeneratePosition
            | Error::SingularMap
            | Error::ZeroTriple
            | Error::DegenerateConstruction { .. }
            | Error::ZeroLeadingInvariant
            | Error::SingularInterior { .. }
            | Error::ZeroVertexLabel { .. } => 3,
            Error::MapSingularity { .. } => 4,
            Error::AtStep { source, .. } => source.exit_code(),
            _ => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
