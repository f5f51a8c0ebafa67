use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inadmissible root system type {0}")]
    InadmissibleType(String),
    #[error("not a root: {0:?}")]
    NotARoot(Vec<i64>),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("node {0} is not marked")]
    NotMarked(usize),
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("empty marking")]
    EmptyMarking,
    #[error("empty subset")]
    EmptySubset,
    #[error("fiber diagram equals its parent")]
    SelfReference,
    #[error("graded quotient did not stabilize within degree {0}")]
    UnboundedGrowth(usize),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("unknown basis label {0}")]
    UnknownBasisLabel(String),
    #[error("degree-zero part is not a subalgebra")]
    NotASubalgebra,
    #[error("missing prolongation step {0}")]
    MissingLowerStep(usize),
    #[error("projective space input {0}")]
    ProjectiveSpaceInput(String),
    #[error("outside supported scope: {0}")]
    ScopeError(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for malformed or inadmissible input, 3 for
    /// inputs outside the supported scope, 4 for violated invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InadmissibleType(_)
            | Error::NotARoot(_)
            | Error::UnknownNode(_)
            | Error::NotMarked(_)
            | Error::Disconnected
            | Error::EmptyMarking
            | Error::EmptySubset
            | Error::SelfReference
            | Error::InvalidPresentation(_)
            | Error::UnknownModel(_)
            | Error::UnknownBasisLabel(_) => 2,
            Error::ScopeError(_) | Error::ProjectiveSpaceInput(_) => 3,
            Error::UnboundedGrowth(_)
            | Error::DimensionMismatch { .. }
            | Error::NotASubalgebra
            | Error::MissingLowerStep(_)
            | Error::InvariantViolation(_) => 4,
        }
    }
}
