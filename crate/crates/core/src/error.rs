use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weight type: {0}")]
    InvalidWeights(String),

    #[error("duplicate point label `{0}`")]
    DuplicatePoint(String),

    #[error("operation needs at least one weighted point")]
    Branchless,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("expected a vector with zero delta coefficient")]
    NotDeltaFree,

    #[error("length must be nonzero")]
    ZeroLength,

    #[error("generic torsion length must be at least 1, got {0}")]
    InvalidTorsionLength(i64),

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("resource bound exceeded: more than {limit} {what}")]
    ResourceBound { limit: usize, what: &'static str },

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn neg(a: i64) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow)
}
