use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomials live over different variable lists")]
    VarMismatch,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("weights must be pairwise distinct, got {0:?}")]
    NotDistinct([i64; 4]),
    #[error("non-generic weight vector {w:?}: {what} vanishes")]
    NonGeneric { w: [i64; 4], what: String },
    #[error("division by a class with zero constant part")]
    DegenerateClass,
    #[error("{divisor} does not divide the dx{index} coefficient {coeff}")]
    NotDivisible {
        divisor: String,
        index: usize,
        coeff: String,
    },
    #[error("unsupported geometry: {0}")]
    Unsupported(String),
    #[error("inconsistent bookkeeping: {0}")]
    Bookkeeping(String),
    #[error("invalid chart path: {0}")]
    InvalidChart(String),
    #[error("unknown bundle `{0}`")]
    UnknownBundle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
