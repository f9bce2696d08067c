use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group is not a Z/2 vector space: {0}")]
    NotZ2VectorSpace(String),
    #[error("group has positive free rank: {0}")]
    InfiniteGroup(String),

    #[error("matrix is not invertible over the integers: {0}")]
    NotInvertible(String),
    #[error("closure exceeded the bound of {0} elements")]
    ClosureBoundExceeded(usize),
    #[error("unknown point group `{0}`")]
    UnknownPointGroup(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cohomology degree {0} is not supported (maximum 3)")]
    DegreeTooHigh(usize),
    #[error("cochain group size {size} exceeds the bound {bound}")]
    CochainBoundExceeded { size: usize, bound: usize },
    #[error("module too large for enumeration: {0}")]
    ModuleTooLarge(String),
    #[error("extension does not split")]
    NotSplit,
    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("element does not belong to the group: {0}")]
    ElementNotInGroup(String),
    #[error("vector system violates the cocycle condition: {0}")]
    InvalidCocycle(String),
    #[error("unknown filter `{0}`")]
    UnknownFilter(String),
    #[error("unknown wallpaper group `{0}`")]
    UnknownWallpaperGroup(String),
    #[error("element does not have order two: {0}")]
    NotOrderTwo(String),

    #[error("oriented bordism is only tabulated up to degree 8, got {0}")]
    UnsupportedDegree(usize),
    #[error("Betti list has {len} entries, degree {degree} needs at least {needed}")]
    BettiListTooShort { len: usize, degree: usize, needed: usize },
    #[error("group {0} is not of the form Z^r x (Z/2)^s")]
    NotCrystalShapedGroup(String),
    #[error("no crystal group assigned for {0}")]
    UnassignedInPaper(String),

    #[error("no generic point found after {0} attempts")]
    NoGenericPoint(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("dataset error in {dataset}: {message}")]
    Dataset { dataset: String, message: String },
}

pub(crate) fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}
