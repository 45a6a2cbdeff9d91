use thiserror::Error;

/// Which instance-level hypothesis of a construction failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precondition {
    /// `Ext^i(transpose(M), R) != 0` for some `i <= d`.
    TorsionfreeLevel,
    /// `Ext^j(Ext^{d+1}(transpose(M), R), R) != 0` for some `j <= d`.
    Grade,
}

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precondition::TorsionfreeLevel => write!(f, "torsionfree_level"),
            Precondition::Grade => write!(f, "grade"),
        }
    }
}

#[derive(Debug, Error)]
pub enum HalgError {
    #[error("precondition {condition} failed at Ext index {index}: {message}")]
    PreconditionFailed { condition: Precondition, index: usize, step: Option<usize>, message: String },
    #[error("capability unavailable: {0}")]
    CapabilityUnavailable(String),
    #[error("inconclusive: projective dimension of term {0} exceeds the cap")]
    Inconclusive(usize),
    #[error("generators of the sub-span are not contained in the ambient span")]
    NotContained,
    #[error("lifting failed: {0}")]
    LiftFailed(String),
    #[error("relation ideal is not admissible: {0}")]
    NotAdmissible(String),
    #[error("bad relation: {0}")]
    BadRelation(String),
    #[error("k = {0} is too small (need k >= 2)")]
    KTooSmall(usize),
    #[error("modules over different rings or sides")]
    MixedRings,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
}

pub type Result<T> = std::result::Result<T, HalgError>;
